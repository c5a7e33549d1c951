#include "flashsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace flashsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(SimConfig&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters");
  return x;
}

long long parse_int(const std::string& v) {
  std::size_t pos = 0;
  long long x = std::stoll(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters");
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected a boolean");
}

const std::map<std::string, Field>& field_table() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    auto d = [&t](const std::string& key, std::function<double&(SimConfig&)> ref) {
      t[key] = Field{
          [ref](SimConfig& c, const std::string& v) { ref(c) = parse_double(v); },
          [ref](const SimConfig& c) {
            return fmt_double(ref(const_cast<SimConfig&>(c)));
          }};
    };
    auto i32 = [&t](const std::string& key, std::function<int&(SimConfig&)> ref) {
      t[key] = Field{
          [ref](SimConfig& c, const std::string& v) {
            ref(c) = static_cast<int>(parse_int(v));
          },
          [ref](const SimConfig& c) {
            return std::to_string(ref(const_cast<SimConfig&>(c)));
          }};
    };
    auto u32 = [&t](const std::string& key, std::function<std::uint32_t&(SimConfig&)> ref) {
      t[key] = Field{
          [ref](SimConfig& c, const std::string& v) {
            long long x = parse_int(v);
            if (x < 0) throw std::invalid_argument("must be nonnegative");
            ref(c) = static_cast<std::uint32_t>(x);
          },
          [ref](const SimConfig& c) {
            return std::to_string(ref(const_cast<SimConfig&>(c)));
          }};
    };
    auto u64 = [&t](const std::string& key, std::function<std::uint64_t&(SimConfig&)> ref) {
      t[key] = Field{
          [ref](SimConfig& c, const std::string& v) {
            long long x = parse_int(v);
            if (x < 0) throw std::invalid_argument("must be nonnegative");
            ref(c) = static_cast<std::uint64_t>(x);
          },
          [ref](const SimConfig& c) {
            return std::to_string(ref(const_cast<SimConfig&>(c)));
          }};
    };
    auto flag = [&t](const std::string& key, std::function<bool&(SimConfig&)> ref) {
      t[key] = Field{
          [ref](SimConfig& c, const std::string& v) { ref(c) = parse_bool(v); },
          [ref](const SimConfig& c) {
            return ref(const_cast<SimConfig&>(c)) ? "true" : "false";
          }};
    };

    i32("wordlines", [](SimConfig& c) -> int& { return c.wordlines; });
    i32("cells_per_wordline", [](SimConfig& c) -> int& { return c.cells_per_wordline; });

    d("mean_er", [](SimConfig& c) -> double& { return c.model.mean_er; });
    d("sigma_er", [](SimConfig& c) -> double& { return c.model.sigma_er; });
    d("mean_tp", [](SimConfig& c) -> double& { return c.model.mean_tp; });
    d("sigma_tp", [](SimConfig& c) -> double& { return c.model.sigma_tp; });
    d("mean_p1", [](SimConfig& c) -> double& { return c.model.mean_p1; });
    d("sigma_p1", [](SimConfig& c) -> double& { return c.model.sigma_p1; });
    d("mean_p2", [](SimConfig& c) -> double& { return c.model.mean_p2; });
    d("sigma_p2", [](SimConfig& c) -> double& { return c.model.sigma_p2; });
    d("mean_p3", [](SimConfig& c) -> double& { return c.model.mean_p3; });
    d("sigma_p3", [](SimConfig& c) -> double& { return c.model.sigma_p3; });
    d("vref_partial", [](SimConfig& c) -> double& { return c.model.vref_partial; });
    d("vref_a", [](SimConfig& c) -> double& { return c.model.vref_a; });
    d("vref_b", [](SimConfig& c) -> double& { return c.model.vref_b; });
    d("vref_c", [](SimConfig& c) -> double& { return c.model.vref_c; });
    d("vpass", [](SimConfig& c) -> double& { return c.model.vpass; });
    d("vpass_partial", [](SimConfig& c) -> double& { return c.model.vpass_partial; });
    d("vpass_erase", [](SimConfig& c) -> double& { return c.model.vpass_erase; });
    d("ispp_step", [](SimConfig& c) -> double& { return c.model.ispp_step; });

    d("kappa_wl", [](SimConfig& c) -> double& { return c.disturb.kappa_wl; });
    d("kappa_bl", [](SimConfig& c) -> double& { return c.disturb.kappa_bl; });
    d("alpha_rd", [](SimConfig& c) -> double& { return c.disturb.alpha_rd; });
    d("pe_sigma_growth", [](SimConfig& c) -> double& { return c.disturb.pe_sigma_growth; });

    i32("codeword_data_bits", [](SimConfig& c) -> int& { return c.ecc.codeword_data_bits; });
    i32("ecc_t", [](SimConfig& c) -> int& { return c.ecc.t; });
    i32("attack_ecc_t", [](SimConfig& c) -> int& { return c.attack_ecc_t; });

    flag("buffer_lsb_in_controller",
         [](SimConfig& c) -> bool& { return c.mitigations.buffer_lsb_in_controller; });
    flag("adaptive_vref", [](SimConfig& c) -> bool& { return c.mitigations.adaptive_vref; });
    flag("scramble", [](SimConfig& c) -> bool& { return c.mitigations.scramble; });
    t["pass_through"] = Field{
        [](SimConfig& c, const std::string& v) {
          if (v == "single") c.mitigations.pass_through = PassMode::Single;
          else if (v == "multiple") c.mitigations.pass_through = PassMode::Multiple;
          else throw std::invalid_argument("expected 'single' or 'multiple'");
        },
        [](const SimConfig& c) {
          return std::string(c.mitigations.pass_through == PassMode::Single
                                 ? "single" : "multiple");
        }};

    d("t_sense_lsb", [](SimConfig& c) -> double& { return c.timing.t_sense_lsb; });
    d("t_ispp_msb", [](SimConfig& c) -> double& { return c.timing.t_ispp_msb; });
    d("t_transfer_common", [](SimConfig& c) -> double& { return c.timing.t_transfer_common; });
    d("t_transfer_min", [](SimConfig& c) -> double& { return c.timing.t_transfer_min; });
    d("t_transfer_max", [](SimConfig& c) -> double& { return c.timing.t_transfer_max; });

    u64("seed", [](SimConfig& c) -> std::uint64_t& { return c.seed; });
    u64("reads", [](SimConfig& c) -> std::uint64_t& { return c.reads; });
    u32("pe_cycles", [](SimConfig& c) -> std::uint32_t& { return c.pe_cycles; });
    u32("attack_pe_cycles", [](SimConfig& c) -> std::uint32_t& { return c.attack_pe_cycles; });
    u64("adaptive_bench_reads",
        [](SimConfig& c) -> std::uint64_t& { return c.adaptive_bench_reads; });
    u64("adaptive_verify_reads",
        [](SimConfig& c) -> std::uint64_t& { return c.adaptive_verify_reads; });
    u64("workload_reads_per_cycle",
        [](SimConfig& c) -> std::uint64_t& { return c.workload_reads_per_cycle; });
    i32("repeats", [](SimConfig& c) -> int& { return c.repeats; });
    return t;
  }();
  return table;
}

}  // namespace

void SimConfig::validate() const {
  std::vector<std::string> issues;
  if (wordlines < 3) issues.emplace_back("wordlines: must be at least 3");
  if (cells_per_wordline < 1) issues.emplace_back("cells_per_wordline: must be at least 1");
  if (repeats < 1) issues.emplace_back("repeats: must be at least 1");
  for (auto& s : model.validate()) issues.push_back(s);
  for (auto& s : disturb.validate()) issues.push_back(s);
  if (cells_per_wordline >= 1) {
    for (auto& s : ecc.validate(cells_per_wordline)) issues.push_back(s);
  }
  if (attack_ecc_t < 1) issues.emplace_back("attack_ecc_t: must be at least 1");
  for (auto& s : timing.validate()) issues.push_back(s);
  if (!issues.empty()) {
    std::string msg = "invalid configuration:";
    for (auto& s : issues) msg += "\n  " + s;
    throw ConfigError(msg);
  }
}

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  const auto& table = field_table();
  std::map<std::string, int> key_lines;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
      it->second.set(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "': malformed value '" + value + "' (" + e.what() + ")");
    }
    key_lines[key] = line_no;
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Attach line numbers to violated invariants whose key was set here.
    std::string msg = e.what();
    for (const auto& [key, ln] : key_lines) {
      const std::string needle = "\n  " + key + ":";
      const std::size_t pos = msg.find(needle);
      if (pos != std::string::npos) {
        msg.insert(pos + needle.size(), " (line " + std::to_string(ln) + ")");
      }
    }
    throw ConfigError(msg);
  }
  return cfg;
}

std::string emit_config(const SimConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : field_table()) {
    out += key;
    out += " = ";
    out += field.get(cfg);
    out += "\n";
  }
  return out;
}

std::string config_echo_comment(const SimConfig& cfg) {
  std::istringstream in(emit_config(cfg));
  std::string out, line;
  while (std::getline(in, line)) {
    out += "# ";
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace flashsim
