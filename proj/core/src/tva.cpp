#include "dgc/tva.hpp"

#include "dgc/simulator.hpp"
#include "dgc/stats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dgc {

std::string to_string(TvaMode mode) { return mode == TvaMode::True ? "true" : "fake"; }

void TvaRunSpec::validate() const {
  if (rho_grid.empty()) throw std::invalid_argument("TvaRunSpec: rho grid is empty");
  for (double r : rho_grid)
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("TvaRunSpec: rho values must lie in [0,1)");
  if (bank_hazards.empty()) throw std::invalid_argument("TvaRunSpec: bank hazard list is empty");
  for (double l : bank_hazards)
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("TvaRunSpec: bank hazards must be > 0");
  if (modes.empty()) throw std::invalid_argument("TvaRunSpec: no mode selected");
  if (paths < 2) throw std::invalid_argument("TvaRunSpec: paths must be >= 2");
  if (!(counterparty_recovery >= 0.0 && counterparty_recovery < 1.0))
    throw std::invalid_argument("TvaRunSpec: counterparty recovery must lie in [0,1)");
  if (!(contract.maturity > 0.0) || contract.payments_per_year < 1)
    throw std::invalid_argument("TvaRunSpec: invalid contract");
  quad.validate();
}

std::vector<TvaRow> run_tva(const TvaRunSpec& spec, const ModelConfig& base) {
  spec.validate();
  base.validate();
  const double horizon = spec.contract.maturity;
  // Default times and the running integrals at defaults are exact for any grid.
  const GridSpec grid{horizon, std::max(1, static_cast<int>(std::ceil(horizon)))};
  std::vector<TvaRow> rows;
  for (double rho : spec.rho_grid) {
    for (double lambda_bank : spec.bank_hazards) {
      ModelConfig config = base;
      config.rho_copula = rho;
      config.hazards[name_index(kBank)] = lambda_bank;
      const IntensityEngine engine(config, spec.quad);
      CdsContract contract = spec.contract;
      contract.spread = engine.cds_par_spread(PortfolioState::initial(config), contract, Scope::G);
      const double loss_given_default = 1.0 - spec.counterparty_recovery;

      const auto samples = map_paths(
          config, grid, SeedSpec{spec.seed}, spec.paths, spec.parallelism, [&](const PathRecord& path) {
            std::pair<double, double> out{0.0, 0.0};
            const int first = path.tau_of(kBank) <= path.tau_of(kCounterparty) ? kBank : kCounterparty;
            const double tau = path.tau_of(first);
            if (!(tau <= horizon)) return out;
            const double scale = std::exp(-contract.rate * tau) * loss_given_default;
            const PortfolioState after = state_at_default(path, config, first, true);
            const PortfolioState before = state_at_default(path, config, first, false);
            out.first = scale * std::max(0.0, engine.cds_clean_value(after, contract, Scope::G));
            out.second = scale * std::max(0.0, engine.cds_clean_value(before, contract, Scope::F));
            return out;
          });

      MeanAccumulator true_acc, fake_acc;
      for (const auto& s : samples) {
        if (!std::isfinite(s.first) || !std::isfinite(s.second)) throw std::domain_error("run_tva: non-finite exposure");
        true_acc.add(s.first);
        fake_acc.add(s.second);
      }
      for (TvaMode mode : spec.modes) {
        const MeanAccumulator& acc = mode == TvaMode::True ? true_acc : fake_acc;
        rows.push_back({rho, lambda_bank, mode, acc.mean(), acc.standard_error()});
      }
    }
  }
  return rows;
}

void write_tva_csv(std::ostream& out, const std::vector<TvaRow>& rows) {
  out << "rho,lambda_bank,mode,tva,se\n";
  char buf[256];
  for (const TvaRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%s,%.12e,%.12e\n", r.rho, r.lambda_bank, to_string(r.mode).c_str(),
                  r.tva, r.se);
    out << buf;
  }
}

}  // namespace dgc
