#pragma once

#include "snacert/certify.hpp"

namespace snacert {

struct ExtendedBasis {
  std::vector<LipFunctional> basis;     // on the parent
  L1IsometryCertificate certificate;    // witnesses restricted to the image of K
};

// Norm-preserving McShane extension of a certified l1^n basis from K (the
// basis' space, embedded in parent by parent_index) to the parent. The
// certificate on the parent draws its sign witnesses from K's points only.
// Throws PreconditionError if the input certificate does not re-verify.
ExtendedBasis extend_basis(const L1IsometryCertificate& on_subspace, const SpacePtr& parent,
                           std::span<const std::size_t> parent_index);

}  // namespace snacert
