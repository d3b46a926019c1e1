#include "snacert/extension.hpp"

#include "snacert/error.hpp"

namespace snacert {

ExtendedBasis extend_basis(const L1IsometryCertificate& on_subspace, const SpacePtr& parent,
                           std::span<const std::size_t> parent_index) {
  if (on_subspace.basis.empty() || !l1_isometry_lip(on_subspace.basis).valid) {
    throw PreconditionError("extend_basis: input certificate is not valid");
  }
  ExtendedBasis out;
  for (const auto& f : on_subspace.basis) {
    out.basis.push_back(mcshane_extend(f, parent, parent_index, lip_norm(f).norm));
  }
  std::vector<bool> domain(parent->size(), false);
  for (std::size_t i : parent_index) domain[i] = true;
  out.certificate = l1_isometry_lip(out.basis, domain);
  if (!out.certificate.valid) {
    throw std::logic_error("extension of a certified l1 basis failed to certify: " + out.certificate.failure);
  }
  return out;
}

}  // namespace snacert
