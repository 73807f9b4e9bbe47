#include "nicholson/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace nicholson {

std::vector<Eigen::Index> persistent_block(const FrobeniusForm& form, const SpectralResult& spectral) {
  if (!(spectral.bound > 0)) throw PreconditionError("persistent_block: requires s(M) > 0");
  if (spectral.per_block_bounds.size() != form.block_count())
    throw PreconditionError("persistent_block: spectral result does not match the Frobenius form");
  std::size_t best = 0;
  for (std::size_t b = 1; b < form.block_count(); ++b)
    if (spectral.per_block_bounds[b] > spectral.per_block_bounds[best]) best = b;
  return form.block_members[best];
}

bool a2_check(const PatchSystem& sys) {
  const double ceiling = std::exp(2.0);
  const auto gammas = gamma_coefficients(sys);
  return std::all_of(gammas.begin(), gammas.end(),
                     [&](const auto& g) { return g && *g > 1.0 && *g <= ceiling; });
}

ClassificationReport classify_dynamics(const PatchSystem& sys) {
  require_valid(sys);
  const auto n = static_cast<std::size_t>(sys.n());
  ClassificationReport r;
  r.community = sys.community_matrix();
  r.frobenius = strongly_connected_blocks(r.community);
  r.irreducible = r.frobenius.block_count() == 1;
  r.spectral = spectral_bound(r.community, r.frobenius);
  r.critical = std::abs(r.spectral.bound) <= kCriticalBand;

  if (r.spectral.bound < kCriticalBand) {
    r.verdict_zero = ZeroVerdict::GloballyStableZero;
    r.total_population = TotalPopulation::NotPersistent;
    r.per_patch = PerPatch::Extinct;
    r.patch_status.assign(n, PatchStatus::Extinct);
  } else {
    r.verdict_zero = ZeroVerdict::ZeroUnstable;
    r.total_population = TotalPopulation::UniformlyPersistent;
    r.a1prime = find_positive_c(r.community);
    if (r.irreducible || r.a1prime) {
      r.per_patch = PerPatch::AllPatchesPersistent;
      r.patch_status.assign(n, PatchStatus::Persistent);
    } else {
      r.per_patch = PerPatch::PersistentOnBlock;
      r.persistent_block = persistent_block(r.frobenius, r.spectral);
      r.patch_status.assign(n, PatchStatus::Undetermined);
      for (auto i : r.persistent_block) r.patch_status[static_cast<std::size_t>(i)] = PatchStatus::Persistent;
    }
  }

  r.a2 = a2_check(sys);
  if (r.a1prime) {
    r.equilibrium = solve_positive_equilibrium(sys);
    if (r.equilibrium) {
      r.x_star_le_2 = r.equilibrium->a2_window;
      r.delay_robustness = delay_robustness(sys, r.equilibrium->x_star);
    }
  }
  if (r.a2) {
    r.gas_certificate = GasCertificate::A2;
  } else if (r.x_star_le_2) {
    r.gas_certificate = GasCertificate::A2Prime_xStarLe2;
  }

  // Permanence constants need a c with every scaled gamma above 1; the
  // equilibrium itself always qualifies.
  std::optional<Vector> permanence_c = r.a1prime;
  if (permanence_c) {
    const auto gammas = scaled_gamma_coefficients(sys, *permanence_c);
    const bool ok = std::all_of(gammas.begin(), gammas.end(), [](const auto& g) { return g && *g > 1.0; });
    if (!ok) permanence_c = r.equilibrium ? std::optional<Vector>(r.equilibrium->x_star) : std::nullopt;
  }
  r.bounds = asymptotic_bounds(sys, permanence_c);
  return r;
}

std::string to_string(ZeroVerdict v) {
  return v == ZeroVerdict::GloballyStableZero ? "GloballyStableZero" : "ZeroUnstable";
}

std::string to_string(TotalPopulation v) {
  return v == TotalPopulation::UniformlyPersistent ? "UniformlyPersistent" : "NotPersistent";
}

std::string to_string(PerPatch v) {
  switch (v) {
    case PerPatch::AllPatchesPersistent: return "AllPatchesPersistent";
    case PerPatch::PersistentOnBlock: return "PersistentOnBlock";
    case PerPatch::Extinct: return "Extinct";
  }
  return "Extinct";
}

std::string to_string(PatchStatus v) {
  switch (v) {
    case PatchStatus::Persistent: return "Persistent";
    case PatchStatus::Extinct: return "Extinct";
    case PatchStatus::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

std::string to_string(GasCertificate v) {
  switch (v) {
    case GasCertificate::A2: return "A2";
    case GasCertificate::A2Prime_xStarLe2: return "A2Prime_xStarLe2";
    case GasCertificate::None: return "None";
  }
  return "None";
}

std::string to_string(DelayVerdict v) {
  return v == DelayVerdict::RobustlyStable ? "RobustlyStable" : "PotentiallyDelayUnstable";
}

}  // namespace nicholson
