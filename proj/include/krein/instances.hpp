#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krein/core.hpp"

namespace krein {

enum class InstanceKind {
  RandomNonnegative,
  RandomGeneric,
  JordanAtZero,
  BlockDiagonalPair,
  SturmLiouville,
};

std::string_view to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(std::string_view name);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::RandomNonnegative;
  std::uint64_t seed = 0;
  int dimension = 2;

  int positive_dimension = -1;   // p in diag(I_p, -I_q); -1 draws it
  bool mix_basis = false;        // conjugate J and A by a random unitary

  // RandomNonnegative
  int kernel_dimension = 0;      // rank deficiency of the PSD factor
  double eigenvalue_floor = 0.0; // JA >= floor I, so |lambda| >= floor

  // JordanAtZero
  int block_size = 2;

  // BlockDiagonalPair
  double perturbation_scale = 1.0;
  double coupling_scale = 1.0;   // scales the off-diagonal block V0

  // SturmLiouville (dimension is the number of interior mesh nodes)
  double sign_change = 0.0;
  std::vector<double> potential;  // empty, one value (constant), or one per node
};

struct Instance {
  InstanceSpec spec;
  FundamentalSymmetry j;
  Matrix a;
  std::optional<Matrix> v;
};

/// Deterministic in (spec fields, seed).
Instance generate(const InstanceSpec& spec);

}  // namespace krein
