// sudler constants|trace|scan-min|liminf|pbounds|corollary <CF> [options]
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sudler/cf.hpp"
#include "sudler/errors.hpp"
#include "sudler/explorer.hpp"

using namespace sudler;
using explorer::Json;
using explorer::Table;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIdentity = 2, kBudget = 3 };

bool wants_json(const std::string& out) { return out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0; }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + out);
  file << text;
}

void emit_table(const Table& t, const std::string& out) { emit(wants_json(out) ? t.to_json().dump(2) + "\n" : t.to_csv(), out); }

// Reports without a row structure are written as JSON whatever the extension.
void emit_json(const Json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sudler products of quadratic irrationals"};
  app.set_config("--config", "", "key=value file presetting any option; flags on the command line win");
  app.allow_config_extras(false);

  std::string command;
  std::string cf_text;
  std::size_t m_max = 12;
  std::size_t n_max = 12;
  long prec = 128;
  std::uint64_t T = 1'000'000;
  std::uint64_t max_qn = 2'000'000;
  std::string out;
  bool incremental = false;
  bool exact_repr = false;
  int digits = 30;

  app.add_option("command", command, "constants, trace, scan-min, liminf, pbounds or corollary")
      ->required()
      ->check(CLI::IsMember({"constants", "trace", "scan-min", "liminf", "pbounds", "corollary"}));
  app.add_option("cf", cf_text, "continued fraction, e.g. \"[0;(1,2)]\" or \"[0;2,(1,2)]\"")->required();
  app.add_option("--m-max,--m_max", m_max, "largest period count m (trace, corollary)");
  auto* n_opt = app.add_option("--n-max,--n_max", n_max,
                               "largest convergent index (scan-min, liminf); for pbounds the largest n, default 10^6");
  app.add_option("--prec,--prec_bits", prec, "working precision in bits")->check(CLI::Range(32L, 1L << 20));
  app.add_option("--T,--T_trunc", T, "truncation of the limit series")->check(CLI::PositiveNumber);
  app.add_option("--max-qn,--max_qn", max_qn, "largest q_n any product may reach");
  app.add_option("--out", out, "output file; .json selects JSON, anything else CSV");
  app.add_flag("--incremental", incremental, "fractional parts by running addition instead of direct evaluation");
  app.add_flag("--exact-repr,--exact_repr", exact_repr, "hexadecimal significands instead of decimals");
  app.add_option("--digits", digits, "significant decimal digits")->check(CLI::Range(1, 10000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (command == "pbounds" && n_opt->count() == 0) n_max = 1'000'000;

  explorer::Settings s;
  s.prec = Precision(prec);
  s.max_qn = max_qn;
  s.T = T;
  s.incremental = incremental;
  s.format = {digits, exact_repr};

  try {
    const cf::PeriodicCF cf = cf::parse_cf(cf_text);
    if (command == "constants") {
      const Json j = explorer::cmd_constants(cf, s);
      emit_json(j, out);
      if (!explorer::identities_passed(j)) {
        std::cerr << "identity check failed\n";
        return kIdentity;
      }
    } else if (command == "trace") {
      const Table t = explorer::cmd_trace(cf, m_max, s);
      emit_table(t, out);
      if (explorer::trace_hit_budget(t)) {
        std::cerr << "some rows exceed max_qn = " << max_qn << "\n";
        return kBudget;
      }
    } else if (command == "scan-min") {
      const auto r = explorer::cmd_scan_min(cf, n_max, s);
      if (!out.empty() && !wants_json(out)) {
        Table t{{"j", "n", "P_j", "P_qn"}, {}};
        for (const auto& v : r.violations) {
          t.rows.push_back({std::to_string(v.j), std::to_string(v.n), explorer::format_real(v.P_j, s.format),
                            explorer::format_real(v.P_qn, s.format)});
        }
        emit_table(t, out);
      } else {
        emit_json(explorer::to_json(r, s.format), out);
      }
    } else if (command == "liminf") {
      emit_json(explorer::cmd_liminf(cf, n_max, s), out);
    } else if (command == "pbounds") {
      emit_json(explorer::to_json(explorer::cmd_pbounds(cf, n_max, s)), out);
    } else {
      emit_table(explorer::cmd_corollary(cf, m_max, s), out);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    if (e.position() < cf_text.size() + 1) std::cerr << "  " << cf_text << "\n  " << std::string(e.position(), ' ') << "^\n";
    return kUsage;
  } catch (const IdentityViolation& e) {
    std::cerr << "identity violation: " << e.what() << "\n";
    return kIdentity;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
