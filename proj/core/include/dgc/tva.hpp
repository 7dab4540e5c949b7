#pragma once

#include "dgc/intensity.hpp"
#include "dgc/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgc {

enum class TvaMode { True, Fake };

std::string to_string(TvaMode mode);

// Exposure to the counterparty on one CDS on reference name 1 bought by the bank, valued at
// the first default of bank or counterparty. True mode values the contract with the
// defaulted name among the conditioning defaults; fake mode uses the reduced information
// just before that default.
struct TvaRunSpec {
  std::vector<double> rho_grid{0.0, 0.2, 0.4, 0.6, 0.8};
  std::vector<double> bank_hazards{0.005, 0.01, 0.02};
  std::vector<TvaMode> modes{TvaMode::True, TvaMode::Fake};
  CdsContract contract{};  // spread replaced by the par spread at time zero
  double counterparty_recovery = 0.4;
  std::uint64_t paths = 50000;
  std::uint64_t seed = 20240917;
  int parallelism = 1;
  QuadratureConfig quad{32, 8.0, 1e-9};

  void validate() const;
};

struct TvaRow {
  double rho = 0.0;
  double lambda_bank = 0.0;
  TvaMode mode = TvaMode::True;
  double tva = 0.0;
  double se = 0.0;
};

// One row per (rho, bank hazard, mode) in grid order. Both modes share the same scenarios.
std::vector<TvaRow> run_tva(const TvaRunSpec& spec, const ModelConfig& base);

// Header "rho,lambda_bank,mode,tva,se".
void write_tva_csv(std::ostream& out, const std::vector<TvaRow>& rows);

}  // namespace dgc
