#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flashsim/config.hpp"
#include "flashsim/scenarios.hpp"

namespace {

using namespace flashsim;

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string mitigations;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t reads = 0;
  bool reads_given = false;
  int repeats = 0;
  bool repeats_given = false;
};

SimConfig load_config(const CliOptions& opt) {
  SimConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config file: " + opt.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = parse_config(buf.str());
  }
  if (opt.seed_given) {
    cfg.seed = opt.seed;
  } else if (const char* env = std::getenv("FLASHSIM_SEED")) {
    cfg.seed = std::strtoull(env, nullptr, 10);
  }
  if (opt.reads_given) cfg.reads = opt.reads;
  if (opt.repeats_given) cfg.repeats = opt.repeats;

  if (!opt.mitigations.empty()) {
    MitigationConfig m;  // start from all-off and enable listed ones
    std::stringstream ss(opt.mitigations);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token == "none") {
        m = MitigationConfig{};
      } else if (token == "buffer") {
        m.buffer_lsb_in_controller = true;
      } else if (token == "adaptive") {
        m.adaptive_vref = true;
      } else if (token == "multipass") {
        m.pass_through = PassMode::Multiple;
      } else if (token == "scramble") {
        m.scramble = true;
      } else if (token == "all") {
        m.buffer_lsb_in_controller = true;
        m.adaptive_vref = true;
        m.pass_through = PassMode::Multiple;
        m.scramble = true;
      } else {
        throw ConfigError("unknown mitigation '" + token + "'");
      }
    }
    cfg.mitigations = m;
  }
  cfg.validate();
  return cfg;
}

void deliver(const CliOptions& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + opt.out_path);
  out << text;
}

template <typename Fn>
std::string repeat_runs(const SimConfig& cfg, Fn&& one_run) {
  std::ostringstream out;
  for (int i = 0; i < cfg.repeats; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    if (cfg.repeats > 1) out << "# repeat seed = " << seed << "\n";
    one_run(seed, out);
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MLC flash two-step programming vulnerability simulator"};
  app.require_subcommand(1);

  CliOptions opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file");
    sub->add_option("--out", opt.out_path, "output path (default: stdout)");
    sub->add_option("--seed", opt.seed, "experiment seed")
        ->trigger_on_parse()
        ->each([&](const std::string&) { opt.seed_given = true; });
    sub->add_option("--mitigations", opt.mitigations,
                    "comma list: none,buffer,adaptive,multipass,scramble,all");
    sub->add_option("--reads", opt.reads, "read count for read-disturb scenarios")
        ->trigger_on_parse()
        ->each([&](const std::string&) { opt.reads_given = true; });
    sub->add_option("--repeats", opt.repeats, "independent seeds to run")
        ->trigger_on_parse()
        ->each([&](const std::string&) { opt.repeats_given = true; });
  };

  CLI::App* c_int = app.add_subcommand("characterize-interference",
                                       "program-interference conditions A-D");
  CLI::App* c_rd = app.add_subcommand("characterize-read-disturb",
                                      "read-disturb wordline-class comparison");
  CLI::App* a_int = app.add_subcommand("attack-interference",
                                       "program-interference exploit");
  CLI::App* a_rd = app.add_subcommand("attack-read-disturb", "read-disturb exploit");
  CLI::App* life = app.add_subcommand("lifetime", "pass-through policy lifetime comparison");
  CLI::App* calib = app.add_subcommand("calibrate",
                                       "search knobs for the published ratio targets");
  for (CLI::App* sub : {c_int, c_rd, a_int, a_rd, life, calib}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const SimConfig cfg = load_config(opt);
    std::string text;

    if (c_int->parsed()) {
      text = repeat_runs(cfg, [&](std::uint64_t seed, std::ostream& out) {
        write_csv(run_interference_characterization(cfg, seed), out);
      });
    } else if (c_rd->parsed()) {
      text = repeat_runs(cfg, [&](std::uint64_t seed, std::ostream& out) {
        const auto rd = run_read_disturb_characterization(cfg, cfg.reads, seed);
        write_csv(rd, out);
        const auto bench =
            run_adaptive_vref_benchmark(cfg, cfg.adaptive_bench_reads, seed);
        out << "summary,adaptive_reduction_pct,adaptive," << bench.n_reads
            << ",,,," << bench.reduction_pct << "\n";
        out << "summary,adaptive_learned_vref,adaptive," << bench.n_reads << ",,,,"
            << bench.learned_vref << "\n";
        out << "summary,adaptive_argmin_matches,adaptive," << bench.n_reads
            << ",,,," << (bench.argmin_matches_bruteforce ? 1 : 0) << "\n";
      });
    } else if (a_int->parsed()) {
      text = repeat_runs(cfg, [&](std::uint64_t seed, std::ostream& out) {
        write_csv(run_interference_exploit(cfg, seed), out, "attack-interference");
      });
    } else if (a_rd->parsed()) {
      text = repeat_runs(cfg, [&](std::uint64_t seed, std::ostream& out) {
        write_csv(run_read_disturb_exploit(cfg, cfg.reads, seed), out,
                  "attack-read-disturb");
      });
    } else if (life->parsed()) {
      text = repeat_runs(cfg, [&](std::uint64_t seed, std::ostream& out) {
        write_csv(run_lifetime_comparison(cfg, seed), out);
      });
    } else if (calib->parsed()) {
      std::ostringstream log;
      const SimConfig tuned = calibrate(cfg, &log);
      text = log.str() + emit_config(tuned);
    }

    deliver(opt, text);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
