#pragma once

// Rotating-wave reduction of H_eta at resonance: the Jaynes-Cummings model in
// the D-operator basis, its 2x2 block structure and dynamical algebra.

#include <optional>
#include <string>
#include <vector>

#include "ldspectra/algebra.hpp"
#include "ldspectra/model.hpp"

namespace ldspectra {

struct JCLevels {
  double lower = 0.0;
  std::optional<double> upper;  // absent for n = 0
};

/// Closed-form E_JC(n, +-), scalar shift included. n = 0 gives the single
/// value -K + shift.
JCLevels jc_eigenvalues(const ModelParams& p, int n);

/// Block n >= 1 over (|n-1> (x) U^dag|e>, |n> (x) U^dag|g>).
struct JCBlock {
  int n = 1;
  Eigen::Matrix2d matrix;
  Eigen::Vector2d eigenvalues;  // ascending
};

struct JCBlockSet {
  double ground = 0.0;  // the 1x1 block at n = 0
  std::vector<JCBlock> blocks;
  double off_block_max = 0.0;  // largest element outside the blocks (guarded)
};

/// Extracts the blocks of (1 (x) U) H_JC (1 (x) U)^dag up to the highest
/// guarded level.
JCBlockSet jc_blocks(const ModelParams& p, const FockTruncation& trunc);

struct AlgebraCheck {
  std::string name;
  double deviation = 0.0;
  bool pass = false;
};

struct AlgebraReport {
  std::vector<AlgebraCheck> checks;
  bool all_pass() const;
};

/// Commutator identities of the JC dynamical algebra on the guarded subspace.
/// The J operators are formed on the strictly positive spectrum of N; the
/// N = 0 kernel is excluded from the J-algebra checks.
AlgebraReport verify_dynamical_algebra(const ModelParams& p, const FockTruncation& trunc);

/// Two constructions of |R(n,s)> (the state generating the first-order
/// correction at resonance) and their rotating / counter-rotating content.
struct ResidualDecomposition {
  Vector ladder_form;   // (nu + 2sK) a^dag|n,-s> + (nu - 2sK) a|n,-s>
  Vector spin_form;     // 2 nu (a^dag + a) Sz|n,s> + 4iK (a^dag - a) Sy|n,s>
  Vector d_form;        // -i[(nu-2K)(D+a^dag + D-a) + (nu+2K)(D+a - D-a^dag)]|n,s>
  double spin_form_difference = 0.0;
  double d_form_difference = 0.0;
  double rotating_weight = 0.0;          // |(nu+2K)(D+a - D-a^dag)|n,s>|^2
  double counter_rotating_weight = 0.0;  // |(nu-2K)(D+a^dag + D-a)|n,s>|^2
};

ResidualDecomposition decompose_R_state(const ModelParams& p, int n, int s);

}  // namespace ldspectra
