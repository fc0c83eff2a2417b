#include "pdgal3/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pdgal3/series_oracle.hpp"

namespace pdgal3::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

RMatrix from_rows(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty() || rows[0].empty()) throw ParseError("empty matrix");
  RMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ParseError("ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = parse_ratfunc(rows[i][j]);
  }
  return m;
}

int get_int(const json& j, const char* key) {
  if (!j.at(key).is_number_integer()) throw ParseError(std::string(key) + " must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

RMatrix parse_matrix_literal(const std::string& text) {
  const std::string s = trim(text);
  if (s.size() < 4 || s.front() != '[' || s.back() != ']') throw ParseError("matrix literal must look like [[a, b], [c, d]]");
  std::vector<std::vector<std::string>> rows;
  std::size_t i = 1;
  while (i + 1 < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == ',') {
      ++i;
      continue;
    }
    if (c != '[') throw ParseError("matrix literal: expected '['");
    const auto close = s.find(']', i);
    if (close == std::string::npos) throw ParseError("matrix literal: unbalanced brackets");
    std::vector<std::string> row;
    std::stringstream ss(s.substr(i + 1, close - i - 1));
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(trim(cell));
    rows.push_back(std::move(row));
    i = close + 1;
  }
  return from_rows(rows);
}

RMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ParseError("matrix row must be an array");
    std::vector<std::string> row;
    for (const auto& e : r) {
      if (e.is_string())
        row.push_back(e.get<std::string>());
      else if (e.is_number_integer())
        row.push_back(std::to_string(e.get<long long>()));
      else
        throw ParseError("matrix entries must be expression strings");
    }
    rows.push_back(std::move(row));
  }
  return from_rows(rows);
}

json matrix_to_json(const RMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::string s = to_string(m(i, j));
      if (parse_ratfunc(s) != m(i, j)) throw std::logic_error("printer round-trip failed for " + s);
      row.push_back(s);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

SystemFile system_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("system file must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchema) throw ParseError("unknown schema");
  SystemFile f;
  if (!j.contains("matrix")) throw ParseError("system file lacks \"matrix\"");
  f.matrix = matrix_from_json(j.at("matrix"));
  if (!f.matrix.is_square()) throw ParseError("matrix must be square");
  if (j.contains("dim") && get_int(j, "dim") != static_cast<int>(f.matrix.rows()))
    throw ParseError("dim does not match the matrix");
  if (j.contains("certificates")) {
    const json& c = j.at("certificates");
    if (c.contains("flag")) {
      FlagCertificate cert;
      for (const auto& s : c.at("flag")) {
        RMatrix sub = matrix_from_json(s);
        if (sub.rows() != f.matrix.rows()) throw ParseError("flag subspace has the wrong number of rows");
        cert.subspaces.push_back(std::move(sub));
      }
      f.flag = std::move(cert);
    }
  }
  if (j.contains("config")) {
    const json& c = j.at("config");
    if (c.contains("max_order")) f.max_order = get_int(c, "max_order");
    if (c.contains("m_bound")) f.m_bound = get_int(c, "m_bound");
    if (c.contains("series_order")) f.series_order = get_int(c, "series_order");
  }
  return f;
}

json system_to_json(const RMatrix& m) {
  return json{{"schema", kSchema}, {"dim", m.rows()}, {"matrix", matrix_to_json(m)}};
}

SystemFile load_system(const std::string& arg) {
  std::ifstream in(arg);
  if (in) {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError(arg + ": " + e.what());
    }
    return system_from_json(j);
  }
  if (!trim(arg).empty() && trim(arg).front() == '[') {
    SystemFile f;
    f.matrix = parse_matrix_literal(arg);
    if (!f.matrix.is_square()) throw ParseError("matrix must be square");
    return f;
  }
  throw ParseError("no such file: " + arg);
}

json group_to_json(const GroupDescription& g) {
  auto strs = [](const std::vector<DPoly>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(to_string(p));
    return a;
  };
  json j{{"kind", to_string(g.kind)}, {"dim", g.dim}, {"equations", strs(g.equations)}, {"flags", g.flags}};
  if (!g.family.empty()) j["family"] = g.family;
  if (!g.data.empty()) j["data"] = g.data;
  if (!g.reduction.empty()) j["reduction"] = g.reduction;
  if (g.kind == GroupDescription::Kind::Pullback || !g.components.empty()) {
    j["ambient"] = strs(g.ambient);
    json comps = json::array();
    for (const auto& c : g.components) {
      json entries = json::array();
      for (const auto& row : c.rep.entries) {
        json r = json::array();
        for (const auto& e : row) r.push_back(to_string(e));
        entries.push_back(std::move(r));
      }
      comps.push_back(json{{"rep",
                            {{"name", c.rep.name},
                             {"source_dim", c.rep.source_dim},
                             {"target_dim", c.rep.target_dim},
                             {"entries", std::move(entries)}}},
                           {"group", group_to_json(c.group.at(0))}});
    }
    j["components"] = std::move(comps);
  }
  return j;
}

Config resolve(const Config& flags, const std::vector<std::string>& set_flags, const SystemFile* file) {
  Config c;
  if (const char* env = std::getenv("PDGAL3_MAX_ORDER")) {
    try {
      c.max_order = std::stoi(env);
    } catch (const std::exception&) {
      throw ParseError("PDGAL3_MAX_ORDER must be an integer");
    }
  }
  if (file) {
    if (file->max_order) c.max_order = *file->max_order;
    if (file->m_bound) c.m_bound = *file->m_bound;
    if (file->series_order) c.series_order = *file->series_order;
  }
  auto set = [&](const char* name) { return std::find(set_flags.begin(), set_flags.end(), name) != set_flags.end(); };
  if (set("max-order")) c.max_order = flags.max_order;
  if (set("m-bound")) c.m_bound = flags.m_bound;
  if (set("series-order")) c.series_order = flags.series_order;
  if (c.max_order < 1 || c.m_bound < 1 || c.series_order < 2) throw ParseError("bounds must be positive");
  return c;
}

namespace {

json config_json(const Config& c) {
  return json{{"max_order", c.max_order}, {"m_bound", c.m_bound}, {"series_order", c.series_order}};
}

/// The reported basis carries fundamental series of the input to series
/// solutions of the normal form.
bool series_consistent(const RMatrix& a, const RMatrix& basis, const RMatrix& nf, int order) {
  const RMatrix sinv = *basis.inverse();
  const Q x0 = ordinary_point(direct_sum(a, direct_sum(sinv, nf)));
  SeriesMatrix u = fundamental_series(a, x0, order);
  SeriesMatrix s{x0, order, expand(sinv, x0, order)};
  return satisfies(nf, series_product(s, u));
}

std::vector<std::string> report_flags(const GroupDescription& g, bool complete) {
  std::vector<std::string> f;
  f.push_back(complete && !g.has_flag("bound-limited") ? "complete" : "bound-limited");
  if (g.kind == GroupDescription::Kind::Deferred) f.push_back("deferred");
  f.push_back("relative to Q(t)");
  return f;
}

}  // namespace

json analyze(const SystemFile& sys, const Config& cfg) {
  if (sys.matrix.rows() != 3) throw Unsupported("dim must be 3");
  const auto t0 = std::chrono::steady_clock::now();
  DispatchConfig dc;
  dc.max_order = cfg.max_order;
  dc.m_bound = cfg.m_bound;
  DispatchResult r = dispatch(sys.matrix, sys.flag, dc);
  const CaseReport& c = r.report;
  json types = json::array();
  for (auto t : c.types) types.push_back(to_string(t));
  json certs = json::array();
  for (const auto& [name, m] : c.certificates) certs.push_back(json{{"name", name}, {"matrix", matrix_to_json(m)}});
  if (sys.flag) {
    json flag = json::array();
    for (const auto& s : sys.flag->subspaces) flag.push_back(matrix_to_json(s));
    certs.push_back(json{{"name", "input flag"}, {"subspaces", flag}});
  }
  const bool series_ok = series_consistent(sys.matrix, c.basis, c.normal_form, cfg.series_order);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return json{{"schema", kSchema},
              {"command", "analyze"},
              {"input", system_to_json(sys.matrix)},
              {"config", config_json(cfg)},
              {"case",
               {{"label", c.label},
                {"path", c.path},
                {"types", types},
                {"via_dual", c.via_dual},
                {"basis", matrix_to_json(c.basis)},
                {"normal_form", matrix_to_json(c.normal_form)},
                {"premises", c.premises}}},
              {"group", group_to_json(r.group)},
              {"certificates", certs},
              {"checks", {{"series_order", cfg.series_order}, {"normal_form_series", series_ok}}},
              {"flags", report_flags(r.group, c.complete)},
              {"timing", {{"seconds", secs}}}};
}

json construct(const std::string& op, const std::vector<std::string>& inputs) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (inputs.size() < lo || inputs.size() > hi) throw ParseError("construct " + op + ": wrong number of inputs");
  };
  auto sys = [&](std::size_t i) { return load_system(inputs.at(i)).matrix; };
  RMatrix m;
  if (op == "tensor" || op == "directsum") {
    need(2, 64);
    m = sys(0);
    for (std::size_t i = 1; i < inputs.size(); ++i) m = op == "tensor" ? tensor(m, sys(i)) : direct_sum(m, sys(i));
  } else if (op == "dual") {
    need(1, 1);
    m = dual(sys(0));
  } else if (op == "prolong") {
    need(1, 1);
    m = prolong(sys(0));
  } else if (op == "wedge") {
    need(1, 2);
    int k = 2;
    if (inputs.size() == 2) {
      try {
        k = std::stoi(inputs[1]);
      } catch (const std::exception&) {
        throw ParseError("wedge: k must be an integer");
      }
    }
    m = wedge(sys(0), k);
  } else if (op == "gauge") {
    need(2, 2);
    m = gauge(sys(0), sys(1));
  } else {
    throw ParseError("unknown construct op: " + op);
  }
  json j = system_to_json(m);
  j["op"] = op;
  return j;
}

json check(const std::string& kind, const std::vector<std::string>& args, const Config& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto need = [&](std::size_t k) {
    if (args.size() != k) throw ParseError("check " + kind + ": expected " + std::to_string(k) + " argument(s)");
  };
  json result;
  if (kind == "constancy") {
    need(1);
    RMatrix a = load_system(args[0]).matrix;
    ConstancyResult cr = is_constant(a);
    result = {{"constant", cr.witness.has_value()}, {"complete", cr.complete}};
    result["witness"] = cr.witness ? matrix_to_json(cr.witness->B) : json(nullptr);
    result["verified"] = cr.witness ? verify_witness(a, cr.witness->B) : false;
  } else if (kind == "classify2") {
    need(1);
    SystemFile f = load_system(args[0]);
    if (f.matrix.rows() != 2) throw Unsupported("dim must be 2");
    Classification c;
    try {
      c = classify2_full(f.matrix, f.flag);
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const DimensionError*>(&e)) throw;
      throw Unsupported("the module is simple: no type");
    }
    result = {{"type", to_string(c.tag)},
              {"basis", matrix_to_json(c.basis)},
              {"normal_form", matrix_to_json(c.normal_form)},
              {"complete", c.complete}};
  } else if (kind == "invariant") {
    need(2);
    RMatrix a = load_system(args[0]).matrix;
    RMatrix s = parse_matrix_literal(args[1]);
    if (s.rows() != a.rows()) throw Unsupported("subspace has the wrong number of rows");
    auto b = is_invariant(a, s);
    result = {{"invariant", b.has_value()}};
    result["restriction"] = b ? matrix_to_json(*b) : json(nullptr);
  } else if (kind == "telescoper") {
    need(1);
    const RatFunc f = parse_ratfunc(args[0]);
    Telescoper t = telescoper(f, cfg.max_order);
    result = {{"bound_limited", t.bound_limited}, {"lower_rank", t.lower_rank}};
    if (t.op) {
      result["operator"] = to_string(*t.op);
      result["order"] = t.op->order();
      result["verified"] = rational_antiderivative(apply_delta(*t.op, f)).has_value();
    } else {
      result["operator"] = nullptr;
    }
  } else {
    throw ParseError("unknown check kind: " + kind);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return json{{"schema", kSchema},  {"command", "check"},   {"kind", kind},
              {"config", config_json(cfg)}, {"result", result}, {"timing", {{"seconds", secs}}}};
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parameterized differential Galois groups of 3x3 systems over Q(t)(x)", "pdgal3"};
  app.require_subcommand(1);
  app.fallthrough();
  Config flags;
  std::string out_path;
  bool pretty = false, compact = false;
  app.add_option("--max-order", flags.max_order, "order bound for telescopers and δ-relations (default 4)");
  app.add_option("--m-bound", flags.m_bound, "bound on character lattice coefficients (default 12)");
  app.add_option("--series-order", flags.series_order, "series order for consistency checks (default 8)");
  app.add_option("--out", out_path, "write the JSON report to this file");
  auto* json_flag = app.add_flag("--json", compact, "compact JSON (default)");
  app.add_flag("--pretty", pretty, "indented JSON")->excludes(json_flag);

  std::string file, op, kind;
  std::vector<std::string> inputs, args;
  auto* an = app.add_subcommand("analyze", "compute the group of a 3x3 system file");
  an->add_option("file", file, "system file or matrix literal")->required();
  auto* co = app.add_subcommand("construct", "tensor, dual, wedge, prolong, gauge or directsum of systems");
  co->add_option("op", op)->required();
  co->add_option("inputs", inputs)->required();
  co->footer("inputs: system files or matrix literals such as \"[[t/x, 1], [0, 0]]\"");
  auto* ch = app.add_subcommand("check", "constancy, classify2, invariant or telescoper");
  ch->add_option("kind", kind)->required();
  ch->add_option("args", args)->required();
  ch->footer("constancy <system> | classify2 <system> | invariant <system> <subspace> | telescoper <expr>");

  // CLI11 reads "[a,b]" as vector syntax and would split matrix literals;
  // shield them with a marker byte and strip it after parsing.
  constexpr char kShield = '\x1f';
  std::vector<std::string> argv_s;
  for (int i = argc - 1; i >= 1; --i) {
    std::string a = argv[i];
    if (!a.empty() && a.front() == '[') a.insert(a.begin(), kShield);
    argv_s.push_back(std::move(a));
  }
  auto unshield = [&](std::string& a) {
    if (!a.empty() && a.front() == kShield) a.erase(a.begin());
  };
  try {
    app.parse(argv_s);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }
  unshield(file);
  for (auto& a : inputs) unshield(a);
  for (auto& a : args) unshield(a);
  std::vector<std::string> set;
  for (const char* name : {"max-order", "m-bound", "series-order"})
    if (app.count(std::string("--") + name) > 0) set.push_back(name);

  try {
    json report;
    if (an->parsed()) {
      SystemFile sys = load_system(file);
      Config cfg = resolve(flags, set, &sys);
      report = analyze(sys, cfg);
      err << "case " << report["case"]["label"].get<std::string>() << ", group " << report["group"]["kind"].get<std::string>()
          << " with " << report["group"]["equations"].size() << " equations\n";
    } else if (co->parsed()) {
      report = construct(op, inputs);
    } else {
      Config cfg = resolve(flags, set, nullptr);
      report = check(kind, args, cfg);
    }
    const std::string text = report.dump(pretty ? 2 : -1);
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) {
        err << "error: cannot write " << out_path << "\n";
        return kUnsupported;
      }
      f << text << "\n";
    } else {
      out << text << "\n";
    }
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const NonFuchsian& e) {
    err << "unsupported: " << e.what()
        << "\nthe system is not Fuchsian, so invariant lines cannot be searched; supply a flag under "
           "\"certificates\": {\"flag\": [...]} in the system file\n";
    return kUnsupported;
  } catch (const Unsupported& e) {
    err << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const std::invalid_argument& e) {
    err << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const std::domain_error& e) {
    err << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  }
}

}  // namespace pdgal3::cli
