#pragma once

// Command-line front end: input parsing, subcommand dispatch and the two
// output formats (human tables, tab-separated records).
//
// Record format, one record per line, fields separated by '\t':
//   solve:     lengths, codewords, penalty, exp_sum (b = +inf, finite d only),
//              max_redundancy, prob_of_max, variance, final_pair (d = +inf only)
//   sweep:     sample b d id / solution id l_1 .. l_n /
//              boundary b d b_lo d_lo b_hi d_hi id_lo id_hi /
//              asymmetry b d id_bd id_db / warning b d message
//   verify:    solver_penalty (or the --lengths vector's), oracle_penalty,
//              optimal (one per vector),
//              bound_gap value pass|fail|n/a, status agree|mismatch
//   entropy:   renyi_entropy value
//   threshold: threshold_D value
// Reals are printed with 12 significant digits; infinities as inf / -inf.
//
// Exit codes: 0 success, 2 parse or input error, 3 unsupported parameter,
// 4 verify mismatch, 5 alphabet too large for the oracle.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dabr/dabr.hpp"

namespace dabr::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kUnsupported = 3,
  kMismatch = 4,
  kTooLarge = 5,
};

class ParseError : public Error {
 public:
  using Error::Error;
};

enum class InputFormat { automatic, plain, delimited, structured };

struct InputSpec {
  std::string source = "-";  // file path, or "-" for standard input
  InputFormat format = InputFormat::automatic;
};

inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Decimal number, or inf / +inf / -inf in any case.
inline double parse_real(std::string_view text) {
  std::string s = lower(std::string(text));
  s.erase(0, s.find_first_not_of(" \t\r\n"));
  s.erase(s.find_last_not_of(" \t\r\n") + 1);
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s.empty()) throw ParseError("empty number");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  if (used != s.size() || std::isnan(v) || std::isinf(v)) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&]() {
    if (!token.empty()) out.push_back(parse_real(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

namespace detail {

inline WeightVector from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
    throw ParseError("structured input needs a \"weights\" array");
  }
  const auto& arr = doc["weights"];
  if (doc.contains("denominator")) {
    const auto& den = doc["denominator"];
    if (!den.is_number_integer() || den.get<std::int64_t>() <= 0) {
      throw ParseError("\"denominator\" must be a positive integer");
    }
    std::vector<std::int64_t> nums;
    for (const auto& x : arr) {
      if (!x.is_number_integer()) throw ParseError("rational mode needs integer numerators");
      nums.push_back(x.get<std::int64_t>());
    }
    return WeightVector::rational(std::move(nums), den.get<std::int64_t>());
  }
  std::vector<double> w;
  for (const auto& x : arr) {
    if (!x.is_number()) throw ParseError("weights must be numbers");
    w.push_back(x.get<double>());
  }
  return WeightVector(std::move(w));
}

inline WeightVector from_plain(const std::string& text) {
  std::vector<double> w;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto values = parse_real_list(line);
    if (values.size() > 1) throw ParseError("plain input expects one weight per line");
    w.insert(w.end(), values.begin(), values.end());
  }
  return WeightVector(std::move(w));
}

}  // namespace detail

// Weights from text. Automatic detection: a leading '{' means structured
// (JSON), a single nonempty line means delimited, anything else plain.
inline WeightVector parse_weights(const std::string& text, InputFormat format = InputFormat::automatic) {
  if (format == InputFormat::automatic) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      format = InputFormat::structured;
    } else {
      std::size_t nonempty = 0;
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) ++nonempty;
      }
      format = nonempty <= 1 ? InputFormat::delimited : InputFormat::plain;
    }
  }
  std::vector<double> w;
  switch (format) {
    case InputFormat::structured:
      return detail::from_json(text);
    case InputFormat::plain:
      return detail::from_plain(text);
    default:
      w = parse_real_list(text);
      if (w.empty()) throw ParseError("no weights given");
      return WeightVector(std::move(w));
  }
}

inline WeightVector read_input(const InputSpec& spec, std::istream& in) {
  std::string text;
  if (spec.source == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream file(spec.source);
    if (!file) throw ParseError("cannot open " + spec.source);
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  }
  return parse_weights(text, spec.format);
}

inline TiePolicy parse_tie(const std::string& s) {
  return s == "top" ? TiePolicy::top_merge : TiePolicy::bottom_merge;
}

namespace detail {

inline std::string join_lengths(const LengthVector& l, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(l[i]);
  }
  return out;
}

inline std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

struct Writer {
  std::ostream& out;
  bool records;

  void field(const std::string& key, const std::string& human_label, const std::vector<std::string>& values,
             const char* human_sep = " ") const {
    if (records) {
      out << key;
      for (const auto& v : values) out << '\t' << v;
      out << '\n';
    } else {
      std::string line = human_label + ":";
      line.resize(std::max<std::size_t>(line.size() + 1, 17), ' ');
      out << line;
      for (std::size_t i = 0; i < values.size(); ++i) out << (i ? human_sep : "") << values[i];
      out << '\n';
    }
  }
};

}  // namespace detail

struct SolveOptions {
  InputSpec input;
  std::string b = "0";
  std::string d = "0";
  std::string tie = "bottom";
  std::string format = "human";
};

inline int cmd_solve(const SolveOptions& opt, std::istream& in, std::ostream& out) {
  const WeightVector raw = read_input(opt.input, in);
  const WeightVector p = raw.is_normalized() ? raw : raw.normalized();
  const ParamPoint params = ParamPoint::make(parse_real(opt.b), parse_real(opt.d));
  const Solution sol = solve_dabr(p, params, parse_tie(opt.tie));
  const detail::Writer w{out, opt.format == "records"};

  std::vector<std::string> lens;
  for (int x : sol.lengths) lens.push_back(std::to_string(x));
  w.field("lengths", "lengths", lens);
  w.field("codewords", "codewords", assign_canonical_codewords(sol.lengths).codewords);
  w.field("penalty", "penalty", {format_real(sol.penalty)});
  if (std::isinf(params.b) && std::isfinite(params.d)) {
    w.field("exp_sum", "sum w 2^(d l)", {format_real(exp_sum(raw, sol.lengths, params.d))});
  }
  if (sol.profile) {
    w.field("max_redundancy", "max redundancy", {format_real(sol.profile->max_value)});
    w.field("prob_of_max", "P(max)", {format_real(sol.profile->prob_of_max)});
  }
  w.field("variance", "variance", {format_real(length_variance(p, sol.lengths))});
  if (sol.exact_final_pair) {
    w.field("final_pair", "final pair",
            {detail::rational_text(sol.exact_final_pair->w1), detail::rational_text(sol.exact_final_pair->w2)},
            ", ");
  } else if (sol.final_pair) {
    w.field("final_pair", "final pair", {format_real(sol.final_pair->w1), format_real(sol.final_pair->w2)}, ", ");
  }
  return kOk;
}

struct SweepOptions {
  InputSpec input;
  std::string grid_b;
  std::string grid_d;
  double resolution = 0.01;
  std::string out_path;
  std::string format = "records";
};

inline void write_region_map(const RegionMap& map, std::ostream& out, bool records) {
  if (records) {
    for (const auto& s : map.samples) {
      out << "sample\t" << format_real(s.b) << '\t' << format_real(s.d) << '\t' << s.solution_id << '\n';
    }
    for (std::size_t id = 0; id < map.solutions.size(); ++id) {
      out << "solution\t" << id << '\t' << detail::join_lengths(map.solutions[id], " ") << '\n';
    }
    for (const auto& bp : map.boundary_points) {
      out << "boundary\t" << format_real(bp.b) << '\t' << format_real(bp.d) << '\t' << format_real(bp.b_lo) << '\t'
          << format_real(bp.d_lo) << '\t' << format_real(bp.b_hi) << '\t' << format_real(bp.d_hi) << '\t'
          << bp.id_lo << '\t' << bp.id_hi << '\n';
    }
    if (map.b_grid == map.d_grid) {
      for (const auto& a : symmetry_report(map)) {
        out << "asymmetry\t" << format_real(a.b) << '\t' << format_real(a.d) << '\t' << a.id_bd << '\t' << a.id_db
            << '\n';
      }
    }
    for (const auto& wr : map.warnings) {
      out << "warning\t" << format_real(wr.b) << '\t' << format_real(wr.d) << '\t' << wr.message << '\n';
    }
    return;
  }
  out << "solutions (" << map.solutions.size() << "):\n";
  for (std::size_t id = 0; id < map.solutions.size(); ++id) {
    out << "  [" << id << "] (" << detail::join_lengths(map.solutions[id], ",") << ")\n";
  }
  out << "region ids, rows b, columns d:\n";
  out << "         b\\d";
  for (double d : map.d_grid) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%7s", format_real(d).c_str());
    out << buf;
  }
  out << '\n';
  for (double b : map.b_grid) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12s", format_real(b).c_str());
    out << buf;
    for (double d : map.d_grid) {
      const auto id = map.solution_at(b, d);
      std::snprintf(buf, sizeof buf, "%7s", id ? std::to_string(*id).c_str() : "-");
      out << buf;
    }
    out << '\n';
  }
  out << "boundary points: " << map.boundary_points.size() << '\n';
  for (const auto& wr : map.warnings) {
    out << "warning: (" << format_real(wr.b) << ", " << format_real(wr.d) << ") " << wr.message << '\n';
  }
}

inline int cmd_sweep(const SweepOptions& opt, std::istream& in, std::ostream& out) {
  const WeightVector raw = read_input(opt.input, in);
  const WeightVector p = raw.is_normalized() ? raw : raw.normalized();
  const auto b_grid = opt.grid_b.empty() ? default_sweep_grid() : parse_real_list(opt.grid_b);
  const auto d_grid = opt.grid_d.empty() ? default_sweep_grid() : parse_real_list(opt.grid_d);
  const RegionMap map = sweep_region_map(p, b_grid, d_grid, opt.resolution);
  const bool records = opt.format == "records";
  if (opt.out_path.empty()) {
    write_region_map(map, out, records);
  } else {
    std::ofstream file(opt.out_path);
    if (!file) throw ParseError("cannot write " + opt.out_path);
    write_region_map(map, file, records);
  }
  return kOk;
}

struct VerifyOptions {
  InputSpec input;
  std::string b = "0";
  std::string d = "0";
  std::string tie = "bottom";
  std::string format = "human";
  std::string lengths;  // check these lengths instead of the solver's
};

inline LengthVector parse_lengths(const std::string& text) {
  LengthVector l;
  for (double v : parse_real_list(text)) {
    if (v != std::floor(v) || v < 0 || v > 1e6) throw ParseError("lengths must be nonnegative integers");
    l.push_back(static_cast<int>(v));
  }
  return l;
}

inline int cmd_verify(const VerifyOptions& opt, std::istream& in, std::ostream& out) {
  const WeightVector raw = read_input(opt.input, in);
  const WeightVector p = raw.is_normalized() ? raw : raw.normalized();
  const ParamPoint params = ParamPoint::make(parse_real(opt.b), parse_real(opt.d));
  Solution sol = solve_dabr(p, params, parse_tie(opt.tie));
  const OracleResult oracle = oracle_minimize(p, params);
  const detail::Writer w{out, opt.format == "records"};
  if (!opt.lengths.empty()) {
    sol.lengths = parse_lengths(opt.lengths);
    if (sol.lengths.size() != p.size()) throw ParseError("--lengths needs one length per weight");
    sol.penalty = params.b > -1.0 ? dabr_value(p, sol.lengths, params) : exp_average(p, sol.lengths, 0.0);
  }

  const bool agree = std::abs(sol.penalty - oracle.minimum) <= kOracleTolerance * std::max(1.0, std::abs(oracle.minimum)) &&
                     std::find(oracle.optimal.begin(), oracle.optimal.end(), sol.lengths) != oracle.optimal.end();
  w.field("solver_penalty", "solver penalty", {format_real(sol.penalty), "(" + detail::join_lengths(sol.lengths, ",") + ")"});
  w.field("oracle_penalty", "oracle penalty", {format_real(oracle.minimum)});
  for (const auto& l : oracle.optimal) w.field("optimal", "optimal", {"(" + detail::join_lengths(l, ",") + ")"});

  bool gap_ok = true;
  try {
    const BoundReport rep = bound_report(p, params, sol.lengths);
    gap_ok = rep.gap >= -kOracleTolerance && rep.gap < 1.0;
    w.field("bound_gap", "bound gap", {format_real(rep.gap), gap_ok ? "pass" : "fail"});
  } catch (const UnsupportedParameter&) {
    w.field("bound_gap", "bound gap", {"n/a", "n/a"});
  }
  const bool ok = agree && gap_ok;
  w.field("status", "status", {ok ? "agree" : "mismatch"});
  return ok ? kOk : kMismatch;
}

inline int cmd_entropy(const InputSpec& input, const std::string& alpha, bool records, std::istream& in,
                       std::ostream& out) {
  const WeightVector raw = read_input(input, in);
  const WeightVector p = raw.is_normalized() ? raw : raw.normalized();
  const double a = parse_real(alpha);
  detail::Writer{out, records}.field("renyi_entropy", "Renyi entropy", {format_real(renyi_entropy(p, a))});
  return kOk;
}

inline int cmd_threshold(const InputSpec& input, const std::string& b, bool records, std::istream& in,
                         std::ostream& out) {
  const WeightVector raw = read_input(input, in);
  const WeightVector p = raw.is_normalized() ? raw : raw.normalized();
  detail::Writer{out, records}.field("threshold_D", "threshold D", {format_real(threshold_D(p, parse_real(b)))});
  return kOk;
}

// Full command line in, exit code out.
inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal prefix codes for d-average b-redundancy penalties"};
  app.require_subcommand(1);

  std::string input_format = "auto";
  const std::map<std::string, InputFormat> input_formats{{"auto", InputFormat::automatic},
                                                         {"plain", InputFormat::plain},
                                                         {"delimited", InputFormat::delimited},
                                                         {"structured", InputFormat::structured}};
  auto add_input = [&](CLI::App* sub, InputSpec& spec) {
    sub->add_option("input", spec.source, "weights file, '-' for standard input")->capture_default_str();
    sub->add_option("--input-format", input_format, "plain, delimited, structured or auto")
        ->check(CLI::IsMember({"auto", "plain", "delimited", "structured"}));
  };
  auto add_format = [](CLI::App* sub, std::string& format) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"human", "records"}))->capture_default_str();
  };

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "optimal code for one (b, d)");
  add_input(solve_cmd, solve.input);
  solve_cmd->add_option("--b", solve.b, "b in [-1, inf]")->capture_default_str();
  solve_cmd->add_option("--d", solve.d, "d, 'inf' allowed")->capture_default_str();
  solve_cmd->add_option("--tie", solve.tie)->check(CLI::IsMember({"bottom", "top"}))->capture_default_str();
  add_format(solve_cmd, solve.format);

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "region map over a (b, d) grid");
  add_input(sweep_cmd, sweep.input);
  sweep_cmd->add_option("--grid-b", sweep.grid_b, "comma-separated b values");
  sweep_cmd->add_option("--grid-d", sweep.grid_d, "comma-separated d values");
  sweep_cmd->add_option("--resolution", sweep.resolution)->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out_path, "write records here instead of stdout");
  add_format(sweep_cmd, sweep.format);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "compare the solver with exhaustive search");
  add_input(verify_cmd, verify.input);
  verify_cmd->add_option("--b", verify.b)->capture_default_str();
  verify_cmd->add_option("--d", verify.d)->capture_default_str();
  verify_cmd->add_option("--tie", verify.tie)->check(CLI::IsMember({"bottom", "top"}))->capture_default_str();
  verify_cmd->add_option("--lengths", verify.lengths, "comma-separated lengths to check instead of the solver's");
  add_format(verify_cmd, verify.format);

  InputSpec entropy_input;
  std::string alpha = "1";
  std::string entropy_format = "human";
  auto* entropy_cmd = app.add_subcommand("entropy", "Renyi entropy of order alpha");
  add_input(entropy_cmd, entropy_input);
  entropy_cmd->add_option("--alpha", alpha)->capture_default_str();
  add_format(entropy_cmd, entropy_format);

  InputSpec threshold_input;
  std::string threshold_b = "0";
  std::string threshold_format = "human";
  auto* threshold_cmd = app.add_subcommand("threshold", "d above which exponential coding is minimax");
  add_input(threshold_cmd, threshold_input);
  threshold_cmd->add_option("--b", threshold_b)->capture_default_str();
  add_format(threshold_cmd, threshold_format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  const InputFormat fmt = input_formats.at(input_format);
  for (InputSpec* spec : {&solve.input, &sweep.input, &verify.input, &entropy_input, &threshold_input}) {
    spec->format = fmt;
  }
  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, in, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, in, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, in, out);
    if (entropy_cmd->parsed()) return cmd_entropy(entropy_input, alpha, entropy_format == "records", in, out);
    if (threshold_cmd->parsed()) {
      return cmd_threshold(threshold_input, threshold_b, threshold_format == "records", in, out);
    }
  } catch (const UnsupportedParameter& e) {
    err << "error: unsupported parameter: " << e.what() << '\n';
    return kUnsupported;
  } catch (const TooLarge& e) {
    err << "error: too large: " << e.what() << '\n';
    return kTooLarge;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  return kParseError;
}

}  // namespace dabr::cli
