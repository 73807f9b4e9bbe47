#pragma once

// Decision pipeline: extinction versus persistence from the spectral bound of
// the community matrix, patchwise persistence from its Frobenius form,
// equilibrium existence from positive feasibility, and delay-independent
// stability certificates.

#include "nicholson/bounds.hpp"
#include "nicholson/equilibrium.hpp"
#include "nicholson/matrix_analysis.hpp"
#include "nicholson/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nicholson {

enum class ZeroVerdict { GloballyStableZero, ZeroUnstable };
enum class TotalPopulation { UniformlyPersistent, NotPersistent };
enum class PerPatch { AllPatchesPersistent, PersistentOnBlock, Extinct };
enum class PatchStatus { Persistent, Extinct, Undetermined };
enum class GasCertificate { A2, A2Prime_xStarLe2, None };

struct ClassificationReport {
  Matrix community;
  SpectralResult spectral;
  bool irreducible = false;
  FrobeniusForm frobenius;
  bool critical = false;  // |s(M)| within the critical band

  ZeroVerdict verdict_zero = ZeroVerdict::ZeroUnstable;
  TotalPopulation total_population = TotalPopulation::NotPersistent;
  PerPatch per_patch = PerPatch::Extinct;
  std::vector<Eigen::Index> persistent_block;  // Omega, when reported
  std::vector<PatchStatus> patch_status;

  std::optional<Vector> a1prime;
  std::optional<EquilibriumCertificate> equilibrium;
  std::optional<DelayRobustnessVerdict> delay_robustness;

  bool a2 = false;
  bool x_star_le_2 = false;
  GasCertificate gas_certificate = GasCertificate::None;

  AsymptoticBounds bounds;
};

/// Omega: members of the block achieving s(M) (lowest block index on ties).
/// Throws PreconditionError when s(M) <= 0.
std::vector<Eigen::Index> persistent_block(const FrobeniusForm& form, const SpectralResult& spectral);

/// Every gamma_i defined and in (1, e^2].
bool a2_check(const PatchSystem& sys);

ClassificationReport classify_dynamics(const PatchSystem& sys);

std::string to_string(ZeroVerdict v);
std::string to_string(TotalPopulation v);
std::string to_string(PerPatch v);
std::string to_string(PatchStatus v);
std::string to_string(GasCertificate v);
std::string to_string(DelayVerdict v);

}  // namespace nicholson
