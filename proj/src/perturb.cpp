#include "perturb.hpp"

#include "error.hpp"
#include "linalg.hpp"

namespace dppriv {

RigidMotion generate_rigid_motion(int n, bool with_translation,
                                  double translation_scale, RandomStream& rng) {
    if (n < 1) fail(errc::invalid_argument, "generate_rigid_motion: n must be >= 1");
    if (translation_scale < 0.0)
        fail(errc::invalid_argument, "generate_rigid_motion: negative translation scale");

    RigidMotion motion;
    motion.rotation = haar_orthogonal(n, rng);
    motion.translation = Vector::Zero(n);
    if (with_translation && translation_scale > 0.0) {
        for (int i = 0; i < n; ++i)
            motion.translation(i) = translation_scale * rng.normal();
    }
    return motion;
}

RecordPermutation identity_permutation(int m) {
    RecordPermutation perm(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
    return perm;
}

RecordPermutation random_permutation(int m, RandomStream& rng) {
    RecordPermutation perm = identity_permutation(m);
    shuffle(perm, rng);
    return perm;
}

RecordPermutation inverse_permutation(const RecordPermutation& perm) {
    RecordPermutation inv(perm.size(), -1);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        int target = perm[i];
        if (target < 0 || static_cast<std::size_t>(target) >= perm.size() || inv[static_cast<std::size_t>(target)] != -1)
            fail(errc::invalid_argument, "inverse_permutation: map is not a bijection");
        inv[static_cast<std::size_t>(target)] = static_cast<int>(i);
    }
    return inv;
}

DataMatrix perturb(const DataMatrix& X, const RigidMotion& motion,
                   const RecordPermutation& perm) {
    if (motion.rotation.rows() != X.rows() || motion.rotation.cols() != X.rows())
        fail(errc::dimension_mismatch, "perturb: motion dimension does not match data");
    if (motion.translation.size() != X.rows())
        fail(errc::dimension_mismatch, "perturb: translation dimension does not match data");
    if (static_cast<Eigen::Index>(perm.size()) != X.cols())
        fail(errc::dimension_mismatch, "perturb: permutation size does not match record count");
    // Validates bijectivity as a side effect.
    (void)inverse_permutation(perm);

    DataMatrix Y(X.rows(), X.cols());
    Matrix moved = motion.rotation * X;
    for (Eigen::Index i = 0; i < X.cols(); ++i)
        Y.col(perm[static_cast<std::size_t>(i)]) = moved.col(i) + motion.translation;
    return Y;
}

} // namespace dppriv
