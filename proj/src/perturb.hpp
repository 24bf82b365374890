#pragma once

#include <vector>

#include "random.hpp"
#include "types.hpp"

namespace dppriv {

// A Euclidean-distance-preserving map x -> rotation * x + translation.
// rotation is orthogonal; translation is all-zeros for purely orthogonal
// perturbations.
struct RigidMotion {
    Matrix rotation;
    Vector translation;
};

// rotation Haar-uniform on O(n); translation entries independent normals
// with standard deviation translation_scale (zero vector when
// with_translation is false).
RigidMotion generate_rigid_motion(int n, bool with_translation,
                                  double translation_scale, RandomStream& rng);

// perm[i] is the output column receiving record i.
using RecordPermutation = std::vector<int>;

RecordPermutation identity_permutation(int m);
RecordPermutation random_permutation(int m, RandomStream& rng);
RecordPermutation inverse_permutation(const RecordPermutation& perm);

// Y with column perm[i] equal to rotation * x_i + translation.
DataMatrix perturb(const DataMatrix& X, const RigidMotion& motion,
                   const RecordPermutation& perm);

} // namespace dppriv
