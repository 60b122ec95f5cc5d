#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dessins/belyi.hpp"
#include "dessins/catalog.hpp"
#include "dessins/enumerate.hpp"
#include "dessins/geometry.hpp"
#include "dessins/pauli.hpp"

namespace dessins::cli {

// exit codes
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1; // verification failure or expectation mismatch
inline constexpr int kUsage = 2;  // bad arguments or malformed input

/// Input problems that are reported with exit code 2.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Dessin load_dessin(const std::string& path) {
  try {
    return parse_dessin_text(read_file(path));
  } catch (const FileFormatError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const InvalidDessin& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline Signature parse_signature(const std::string& text) {
  Signature s;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(text);
  std::string rest;
  if (!(in >> s.black >> c1 >> s.white >> c2 >> s.faces >> c3 >> s.genus) || c1 != ',' || c2 != ',' || c3 != ',' ||
      (in >> rest))
    throw InputError("signature must look like B,W,F,g");
  return s;
}

inline nlohmann::json with_schema(const char* schema, nlohmann::json j) {
  nlohmann::json out = {{"schema", schema}};
  out.update(j);
  return out;
}

// canonical forms are byte strings
inline std::string hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

inline void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump() << '\n'; }

/// "8 (x2)" style listing of a spectrum.
inline std::string spectrum_text(const Spectrum& s) {
  std::ostringstream o;
  o << '{';
  bool first = true;
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    for (std::size_t k = 0; k < it->multiplicity; ++k) {
      o << (first ? "" : ", ");
      first = false;
      if (it->exact)
        o << *it->exact;
      else
        o << std::setprecision(12) << it->value;
    }
  o << '}';
  return o.str();
}

// ---------------------------------------------------------------------------
// expectation files

namespace expect_detail {

/// Every key of want appears in got with a matching value; arrays match
/// elementwise; numbers within a relative 1e-9.
inline bool subset(const nlohmann::json& want, const nlohmann::json& got) {
  if (want.is_object()) {
    if (!got.is_object())
      return false;
    for (auto it = want.begin(); it != want.end(); ++it)
      if (!got.contains(it.key()) || !subset(it.value(), got[it.key()]))
        return false;
    return true;
  }
  if (want.is_array()) {
    if (!got.is_array() || got.size() != want.size())
      return false;
    for (std::size_t i = 0; i < want.size(); ++i)
      if (!subset(want[i], got[i]))
        return false;
    return true;
  }
  if (want.is_number() && got.is_number()) {
    double a = want.get<double>(), b = got.get<double>();
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
  }
  return want == got;
}

inline bool any_line(const nlohmann::json& want, const std::vector<nlohmann::json>& lines) {
  return std::any_of(lines.begin(), lines.end(), [&](const nlohmann::json& l) { return subset(want, l); });
}

} // namespace expect_detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// One JSON object per line:
///   {"name", "args": [...], "exit": 0, "expect": fragment, "expect_lines": [fragments],
///    "lines": count, "paper": fragment, "note": "..."}
/// The command's output lines are parsed as JSON and a fragment passes when
/// some line contains it. "${here}" in args is the expectation file's
/// directory. A mismatch against "paper" is listed, not counted as failure.
inline int run_expect(const std::string& path, bool verbose, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: missing expectation file " << path << '\n';
    return kUsage;
  }
  std::string here = std::filesystem::path(path).parent_path().string();
  if (here.empty())
    here = ".";
  struct Discrepancy {
    std::string name, note;
    nlohmann::json paper;
  };
  std::vector<std::string> failures;
  std::vector<Discrepancy> paper;
  std::size_t checks = 0, lineno = 0;
  std::string row;
  while (std::getline(in, row)) {
    ++lineno;
    if (row.find_first_not_of(" \t\r") == std::string::npos || row[row.find_first_not_of(" \t")] == '#')
      continue;
    nlohmann::json entry;
    try {
      entry = nlohmann::json::parse(row);
    } catch (const nlohmann::json::parse_error& e) {
      err << "error: " << path << ":" << lineno << ": " << e.what() << '\n';
      return kUsage;
    }
    if (!entry.is_object() || !entry.contains("args") || !entry["args"].is_array()) {
      err << "error: " << path << ":" << lineno << ": an entry needs an \"args\" array\n";
      return kUsage;
    }
    std::string name = entry.value("name", "line " + std::to_string(lineno));
    std::vector<std::string> cmd;
    for (const auto& a : entry["args"]) {
      std::string s = a.get<std::string>();
      for (std::size_t p; (p = s.find("${here}")) != std::string::npos;)
        s.replace(p, 7, here);
      cmd.push_back(s);
    }
    ++checks;
    std::ostringstream cout_, cerr_;
    int code = run(cmd, cout_, cerr_);
    std::vector<nlohmann::json> lines;
    std::istringstream captured(cout_.str());
    for (std::string l; std::getline(captured, l);) {
      if (l.empty())
        continue;
      auto j = nlohmann::json::parse(l, nullptr, false);
      lines.push_back(j.is_discarded() ? nlohmann::json(l) : j);
    }
    std::vector<std::string> why;
    int want_exit = entry.value("exit", 0);
    if (code != want_exit)
      why.push_back("exit " + std::to_string(code) + ", expected " + std::to_string(want_exit) +
                    (cerr_.str().empty() ? "" : " (" + cerr_.str().substr(0, cerr_.str().find('\n')) + ")"));
    if (entry.contains("lines") && lines.size() != entry["lines"].get<std::size_t>())
      why.push_back(std::to_string(lines.size()) + " output lines, expected " + entry["lines"].dump());
    if (entry.contains("expect") && !expect_detail::any_line(entry["expect"], lines))
      why.push_back("no output line contains " + entry["expect"].dump());
    for (const auto& frag : entry.value("expect_lines", nlohmann::json::array()))
      if (!expect_detail::any_line(frag, lines))
        why.push_back("no output line contains " + frag.dump());
    if (why.empty()) {
      if (verbose)
        out << "ok    " << name << '\n';
    } else {
      std::string msg = name + ": " + why[0];
      for (std::size_t k = 1; k < why.size(); ++k)
        msg += "; " + why[k];
      failures.push_back(msg);
      out << "FAIL  " << msg << '\n';
    }
    if (entry.contains("paper") && !expect_detail::any_line(entry["paper"], lines))
      paper.push_back({name, entry.value("note", ""), entry["paper"]});
  }
  if (checks == 0) {
    err << "warning: " << path << " has no checks\n";
    out << "0 checks\n";
    return kOk;
  }
  if (!paper.empty()) {
    out << "\npaper-discrepancy (" << paper.size() << ", informational):\n";
    for (const auto& d : paper) {
      out << "  " << d.name << ": paper says " << d.paper.dump() << '\n';
      if (!d.note.empty())
        out << "    " << d.note << '\n';
    }
  }
  out << '\n'
      << checks << " checks, " << failures.size() << " deviations, " << paper.size() << " paper discrepancies\n";
  return failures.empty() ? kOk : kFailed;
}

// ---------------------------------------------------------------------------

/// Runs one command line (without the program name). Output is
/// deterministic for fixed arguments.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dessins d'enfants: enumeration, induced geometries, Belyi maps and Pauli checks", "dessins"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // enumerate
  struct {
    std::size_t index = 0;
    std::string mode = "preclean", passport, signature, group_order, emit = "count", dir;
    std::size_t workers = 1;
  } en;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "Enumerate dessins of one index up to relabeling");
  enumerate_cmd->add_option("--index,-n", en.index, "Number of edges")->required()->check(CLI::PositiveNumber);
  enumerate_cmd->add_option("--mode", en.mode, "preclean or hypermap")
      ->check(CLI::IsMember({"preclean", "hypermap"}));
  enumerate_cmd->add_option("--passport", en.passport, "Passport filter, '*' for a free entry");
  enumerate_cmd->add_option("--signature", en.signature, "Signature filter B,W,F,g");
  enumerate_cmd->add_option("--group-order", en.group_order, "Monodromy group order filter");
  enumerate_cmd->add_option("--emit", en.emit, "count, jsonl or files")
      ->check(CLI::IsMember({"count", "jsonl", "files"}));
  enumerate_cmd->add_option("--dir", en.dir, "Output directory for --emit files");
  enumerate_cmd->add_option("--workers,-j", en.workers, "Worker threads")->check(CLI::PositiveNumber);

  // analyze / geometry / recognize
  std::string dessin_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "Signature, passport, group order and canonical form");
  analyze_cmd->add_option("file", dessin_path, "Dessin file")->required();

  struct {
    std::string dot;
    bool setwise = false, no_spectrum = false;
  } geo;
  auto* geometry_cmd = app.add_subcommand("geometry", "Induced geometries, one JSON line each");
  geometry_cmd->add_option("file", dessin_path, "Dessin file")->required();
  geometry_cmd->add_option("--dot", geo.dot, "Also write one DOT file per geometry into this directory");
  geometry_cmd->add_flag("--setwise", geo.setwise, "Setwise pair stabilizers");
  geometry_cmd->add_flag("--no-spectrum", geo.no_spectrum, "Skip the adjacency spectrum");

  bool recognize_json = false;
  auto* recognize_cmd = app.add_subcommand("recognize", "Name the induced geometries");
  recognize_cmd->add_option("file", dessin_path, "Dessin file")->required();
  recognize_cmd->add_flag("--setwise", geo.setwise, "Setwise pair stabilizers");
  recognize_cmd->add_flag("--json", recognize_json, "JSON lines instead of a table");

  // catalog
  struct {
    std::size_t lo = 1, hi = 0, workers = 1;
    std::string emit = "table", mode = "preclean";
  } cat;
  auto* catalog_cmd = app.add_subcommand("catalog", "Invariant rows of every induced geometry up to an index");
  catalog_cmd->add_option("--max-index", cat.hi, "Largest index")->required()->check(CLI::PositiveNumber);
  catalog_cmd->add_option("--min-index", cat.lo, "Smallest index")->check(CLI::PositiveNumber);
  catalog_cmd->add_option("--emit", cat.emit, "table or jsonl")->check(CLI::IsMember({"table", "jsonl"}));
  catalog_cmd->add_option("--mode", cat.mode, "preclean or hypermap")->check(CLI::IsMember({"preclean", "hypermap"}));
  catalog_cmd->add_option("--workers,-j", cat.workers, "Worker threads")->check(CLI::PositiveNumber);

  // references
  std::string ref_name;
  auto* references_cmd = app.add_subcommand("references", "Published rows against the reference constructions");
  references_cmd->add_option("--name", ref_name, "Only this catalog entry");

  // search
  auto* search_cmd = app.add_subcommand("search", "Dessins with a given passport");
  search_cmd->add_option("--index,-n", en.index, "Number of edges")->required()->check(CLI::PositiveNumber);
  search_cmd->add_option("--passport", en.passport, "Passport, '*' for a free entry")->required();
  search_cmd->add_option("--group-order", en.group_order, "Monodromy group order");
  search_cmd->add_option("--mode", en.mode, "preclean or hypermap")->check(CLI::IsMember({"preclean", "hypermap"}));
  search_cmd->add_option("--workers,-j", en.workers, "Worker threads")->check(CLI::PositiveNumber);

  // belyi verify
  struct {
    std::string path, passport;
    double tol = 1e-8;
  } bel;
  auto* belyi_cmd = app.add_subcommand("belyi", "Belyi map checks");
  belyi_cmd->require_subcommand(1);
  auto* verify_cmd = belyi_cmd->add_subcommand("verify", "Verify a rational map against a passport");
  verify_cmd->add_option("map", bel.path, "Map file")->required();
  verify_cmd->add_option("--passport", bel.passport, "Expected passport (overrides the file)");
  verify_cmd->add_option("--tol", bel.tol, "Tolerance")->check(CLI::PositiveNumber);

  // pauli
  struct {
    std::vector<std::string> ops;
    std::string path;
    std::size_t qubits = 2;
    bool json = false;
  } pl;
  auto* pauli_cmd = app.add_subcommand("pauli", "Pauli operator checks");
  pauli_cmd->require_subcommand(1);
  auto* chsh_cmd = pauli_cmd->add_subcommand("chsh", "Spectrum of the CHSH operator of four observables");
  chsh_cmd->add_option("ops", pl.ops, "Four operators")->required()->expected(4);
  chsh_cmd->add_flag("--json", pl.json, "One JSON line");
  auto* magic_cmd = pauli_cmd->add_subcommand("magic", "Line products of a labelled configuration");
  magic_cmd->add_option("file", pl.path, "Configuration file")->required();
  magic_cmd->add_flag("--json", pl.json, "One JSON line");
  auto* squares_cmd = pauli_cmd->add_subcommand("count-squares", "Squares in the commutation graph");
  squares_cmd->add_option("--qubits", pl.qubits, "Number of qubits")->required();
  squares_cmd->add_flag("--json", pl.json, "One JSON line");

  // expect
  std::string expect_path;
  bool expect_verbose = false;
  auto* expect_cmd = app.add_subcommand("expect", "Run an expectation file");
  expect_cmd->add_option("file", expect_path, "Expectation file (JSON lines)")->required();
  expect_cmd->add_flag("--verbose,-v", expect_verbose, "List passing checks too");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto mode_of = [](const std::string& m) { return parse_mode(m); };
  auto stab = [&] { return geo.setwise ? StabilizerMode::setwise : StabilizerMode::pointwise; };

  try {
    if (*enumerate_cmd || *search_cmd) {
      EnumerationTask task;
      task.n = en.index;
      task.mode = mode_of(en.mode);
      task.workers = en.workers;
      if (!en.passport.empty())
        task.passport = PassportPattern::parse(en.passport);
      if (!en.signature.empty())
        task.signature = parse_signature(en.signature);
      if (!en.group_order.empty()) {
        if (en.group_order.find_first_not_of("0123456789") != std::string::npos)
          throw InputError("--group-order must be a positive integer");
        task.group_order = big_int(en.group_order);
      }
      if (task.n > kDefaultMaxIndex)
        err << "note: index " << task.n << " is beyond the tabulated range (13); counts are not checked against "
            << "published values\n";
      if (*search_cmd) {
        auto found = find_by_passport(task.n, task.passport, task.group_order, task.mode, task.workers);
        for (const auto& d : found) {
          auto j = to_json(d);
          j["canonical_form"] = hex(d.canonical_form());
          emit(out, with_schema("dessins.dessin.v1", j));
        }
        if (found.empty())
          err << "no dessin of index " << task.n << " with passport " << task.passport.to_string() << '\n';
        return kOk;
      }
      if (en.emit == "count") {
        out << count(task) << '\n';
        return kOk;
      }
      auto list = enumerate(task);
      if (en.emit == "jsonl") {
        for (const auto& d : list)
          emit(out, with_schema("dessins.dessin.v1", to_json(d)));
        return kOk;
      }
      if (en.dir.empty())
        throw InputError("--emit files needs --dir");
      std::filesystem::create_directories(en.dir);
      std::size_t width = std::to_string(list.size()).size();
      for (std::size_t k = 0; k < list.size(); ++k) {
        std::ostringstream name;
        name << "n" << task.n << "_" << std::setw(static_cast<int>(width)) << std::setfill('0') << k + 1 << ".dessin";
        auto path = std::filesystem::path(en.dir) / name.str();
        std::ofstream f(path);
        if (!(f << to_text(list[k])))
          throw InputError("cannot write " + path.string());
      }
      out << list.size() << '\n';
      return kOk;
    }

    if (*analyze_cmd) {
      auto d = load_dessin(dessin_path);
      auto j = to_json(d);
      j["mode"] = to_string(d.mode());
      j["gamma"] = d.gamma().to_string();
      j["automorphisms"] = d.automorphism_count();
      j["canonical_form"] = hex(d.canonical_form());
      emit(out, with_schema("dessins.analysis.v1", j));
      return kOk;
    }

    if (*geometry_cmd) {
      auto d = load_dessin(dessin_path);
      auto igs = induce(d, stab());
      if (!geo.dot.empty())
        std::filesystem::create_directories(geo.dot);
      for (std::size_t k = 0; k < igs.size(); ++k) {
        auto j = geometry_report(igs[k], !geo.no_spectrum);
        j["class"] = k + 1;
        j["stabilizer_mode"] = geo.setwise ? "setwise" : "pointwise";
        j["connected_class"] = igs[k].cls.connected;
        emit(out, with_schema("dessins.geometry.v1", j));
        if (!geo.dot.empty()) {
          auto path = std::filesystem::path(geo.dot) / ("geometry_" + std::to_string(k + 1) + ".dot");
          std::ofstream f(path);
          if (!(f << to_dot(igs[k].geometry, "geometry_" + std::to_string(k + 1))))
            throw InputError("cannot write " + path.string());
        }
      }
      return kOk;
    }

    if (*recognize_cmd) {
      auto d = load_dessin(dessin_path);
      auto igs = induce(d, stab());
      if (!recognize_json)
        out << "class   V    E  T_line  T_plain      S  lines  recognized\n";
      for (std::size_t k = 0; k < igs.size(); ++k) {
        auto inv = invariants(igs[k].geometry, false);
        auto ms = recognize(igs[k].geometry, inv);
        if (recognize_json) {
          auto all = nlohmann::json::array();
          for (const auto& m : ms)
            all.push_back(to_json(m));
          emit(out, with_schema("dessins.recognition.v1",
                                {{"class", k + 1},
                                 {"V", inv.V},
                                 {"E", inv.E},
                                 {"T_line", inv.T_line},
                                 {"T_plain", inv.T_plain},
                                 {"S_chordless", inv.S_chordless},
                                 {"connected", inv.connected},
                                 {"lines", igs[k].geometry.lines().size()},
                                 {"recognized_as", ms.empty() ? nlohmann::json(nullptr) : nlohmann::json(ms[0].entry->name)},
                                 {"matches", all}}));
          continue;
        }
        std::ostringstream row;
        row << std::setw(5) << k + 1 << std::setw(4) << inv.V << std::setw(5) << inv.E << std::setw(8) << inv.T_line
            << std::setw(9) << inv.T_plain << std::setw(7) << inv.S_chordless << std::setw(7)
            << igs[k].geometry.lines().size() << "  ";
        if (ms.empty())
          row << "-";
        else
          row << ms[0].entry->name << " (" << to_string(ms[0].tier) << (ms[0].invariants_agree ? "" : ", row differs")
              << ")";
        if (!inv.connected)
          row << " [disconnected]";
        out << row.str() << '\n';
      }
      return kOk;
    }

    if (*catalog_cmd) {
      if (cat.lo > cat.hi)
        throw InputError("--min-index is larger than --max-index");
      auto mode = mode_of(cat.mode);
      if (cat.hi > max_index(mode))
        throw ResourceBoundExceeded(cat.hi, max_index(mode));
      auto rows = catalog_rows(cat.lo, cat.hi, cat.workers, mode);
      if (cat.emit == "jsonl") {
        for (const auto& r : rows)
          emit(out, with_schema("dessins.catalog_row.v1", to_json(r)));
        return kOk;
      }
      out << "index   V    E  T_line      S  dessins  recognized\n";
      for (const auto& r : rows) {
        std::ostringstream row;
        row << std::setw(5) << r.index << std::setw(4) << r.V << std::setw(5) << r.E << std::setw(8) << r.T_line
            << std::setw(7) << r.S_chordless << std::setw(9) << r.dessins << "  ";
        if (r.recognized_as.empty())
          row << "-";
        else
          row << r.recognized_as << " (" << r.match_tier << (r.invariants_agree ? "" : ", row differs") << ")";
        if (!r.connected)
          row << " [disconnected]";
        else if (!r.spanning)
          row << " [not spanning]";
        out << row.str() << '\n';
      }
      return kOk;
    }

    if (*references_cmd) {
      bool any = false;
      for (const auto& e : catalog()) {
        if (!ref_name.empty() && e.name != ref_name)
          continue;
        any = true;
        nlohmann::json j = {{"name", e.name}, {"table", e.table}};
        j["published"] = {{"V", e.V}, {"E", e.E}, {"T", e.T}, {"S", e.S}};
        if (e.spectrum)
          j["published"]["spectrum"] = to_json(*e.spectrum);
        const Geometry* g = reference(e);
        if (!g) {
          j["computed"] = nullptr;
          emit(out, with_schema("dessins.reference.v1", j));
          continue;
        }
        auto inv = invariants(*g, true);
        j["computed"] = {{"V", inv.V},           {"E", inv.E}, {"T", inv.T_line}, {"T_plain", inv.T_plain},
                         {"S", inv.S_chordless}, {"lines", g->lines().size()}};
        if (inv.spectrum)
          j["computed"]["spectrum"] = to_json(*inv.spectrum);
        j["spectrum_matches"] = e.spectrum && inv.spectrum ? nlohmann::json(spectrum_matches(*inv.spectrum, *e.spectrum, 1e-9))
                                                           : nlohmann::json(nullptr);
        auto diffs = nlohmann::json::array();
        for (const auto& d : reference_discrepancies(e))
          diffs.push_back({{"field", d.field}, {"published", d.published}, {"computed", d.computed}});
        j["discrepancies"] = std::move(diffs);
        emit(out, with_schema("dessins.reference.v1", j));
      }
      if (!any)
        throw InputError("no catalog entry named '" + ref_name + "'");
      return kOk;
    }

    if (*verify_cmd) {
      RationalMap map;
      try {
        map = RationalMap::parse(read_file(bel.path));
      } catch (const MapParseError& e) {
        throw InputError(bel.path + ": " + e.what());
      }
      std::optional<PassportPattern> pp;
      if (!bel.passport.empty())
        pp = PassportPattern::parse(bel.passport);
      auto report = verify(map, pp, bel.tol);
      emit(out, with_schema("dessins.belyi.v1", to_json(report)));
      return report.verdict == Verdict::pass ? kOk : kFailed;
    }

    if (*chsh_cmd) {
      std::vector<PauliOp> ops;
      for (const auto& s : pl.ops)
        ops.push_back(PauliOp::parse(s));
      auto r = chsh_check(ops);
      if (pl.json) {
        emit(out, with_schema("dessins.chsh.v1", to_json(r)));
      } else {
        out << "C^2 eigenvalues: " << spectrum_text(r.c2_eigenvalues) << (r.exact ? " (exact)" : " (numeric)") << '\n';
        out << "norm: " << std::setprecision(17) << r.norm;
        if (r.norm_squared)
          out << " = sqrt(" << *r.norm_squared << ")";
        out << '\n';
        if (r.structure_ok())
          out << "structure: ok\n";
        for (const auto& v : r.violations)
          out << "violation: " << v << '\n';
      }
      return r.structure_ok() ? kOk : kFailed;
    }

    if (*magic_cmd) {
      LabeledGeometry lg;
      try {
        lg = LabeledGeometry::parse(read_file(pl.path));
      } catch (const PauliError& e) {
        throw InputError(pl.path + ": " + e.what());
      }
      auto v = magic_check(lg);
      if (pl.json) {
        auto j = to_json(v, lg);
        auto inv = invariants(lg.geometry, false);
        auto ms = recognize(lg.geometry, inv);
        j["points"] = lg.labels.size();
        j["recognized_as"] = ms.empty() ? nlohmann::json(nullptr) : nlohmann::json(ms[0].entry->name);
        emit(out, with_schema("dessins.magic.v1", j));
      } else {
        for (const auto& l : v.lines) {
          std::string ops;
          for (point p : l.points)
            ops += (ops.empty() ? "" : " ") + lg.labels[p].to_string();
          out << ops << "  ->  " << (l.sign ? (*l.sign > 0 ? "+I" : "-I") : l.product.to_string()) << '\n';
        }
        out << "negative lines: " << v.negative_lines << (v.negative_lines % 2 ? " (odd)" : " (even)") << '\n';
        out << (v.contextual ? "contextual" : "not contextual") << '\n';
        for (const auto& e : v.errors)
          out << "error: " << e << '\n';
      }
      return v.errors.empty() ? kOk : kFailed;
    }

    if (*squares_cmd) {
      auto s = count_squares(pl.qubits);
      if (pl.json)
        emit(out, with_schema("dessins.squares.v1",
                              {{"qubits", pl.qubits}, {"points", nontrivial_paulis(pl.qubits).size()}, {"squares", s}}));
      else
        out << s << '\n';
      return kOk;
    }

    if (*expect_cmd)
      return run_expect(expect_path, expect_verbose, out, err);
  } catch (const ResourceBoundExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PauliError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}

} // namespace dessins::cli
