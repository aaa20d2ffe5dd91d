#include "haarwalk/io.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace haarwalk {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Spec files are a token stream after a "haarwalk <kind> v1" header: known
// keys introduced by "key =" collect whitespace-separated value tokens until
// the next "key =". Unknown keys are hard errors.
struct SpecFile {
  std::string kind;
  std::map<std::string, std::vector<std::string>> values;
  fs::path dir;

  bool has(const std::string& k) const { return values.count(k) > 0; }

  const std::vector<std::string>& list(const std::string& k) const {
    auto it = values.find(k);
    if (it == values.end()) throw SpecError("missing key '" + k + "' in spec");
    return it->second;
  }

  std::string one(const std::string& k) const {
    const auto& v = list(k);
    if (v.size() != 1) throw SpecError("key '" + k + "' expects a single value");
    return v[0];
  }

  std::string one_or(const std::string& k, const std::string& dflt) const {
    return has(k) ? one(k) : dflt;
  }

  long long integer(const std::string& k) const {
    try {
      return std::stoll(one(k));
    } catch (...) {
      throw SpecError("key '" + k + "' expects an integer");
    }
  }

  long long integer_or(const std::string& k, long long dflt) const {
    return has(k) ? integer(k) : dflt;
  }

  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& t : list(k)) {
      try {
        out.push_back(std::stod(t));
      } catch (...) {
        throw SpecError("key '" + k + "' expects decimal values, got '" + t + "'");
      }
    }
    return out;
  }

  std::vector<long long> integers(const std::string& k) const {
    std::vector<long long> out;
    for (const auto& t : list(k)) {
      try {
        out.push_back(std::stoll(t));
      } catch (...) {
        throw SpecError("key '" + k + "' expects integers, got '" + t + "'");
      }
    }
    return out;
  }
};

SpecFile parse_spec_file(const fs::path& path, const std::string& expected_kind,
                         const std::set<std::string>& known_keys) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open spec file: " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  if (tokens.size() < 3 || tokens[0] != "haarwalk" || tokens[2] != "v1")
    throw SpecError("spec file must start with 'haarwalk <kind> v1': " + path.string());
  SpecFile f;
  f.kind = tokens[1];
  f.dir = path.parent_path();
  if (f.kind != expected_kind)
    throw SpecError("expected a '" + expected_kind + "' spec, found '" + f.kind + "' in " +
                    path.string());
  std::string current;
  for (std::size_t i = 3; i < tokens.size(); ++i) {
    if (i + 1 < tokens.size() && tokens[i + 1] == "=") {
      if (!known_keys.count(tokens[i]))
        throw SpecError("unknown key '" + tokens[i] + "' in " + path.string());
      if (f.values.count(tokens[i]))
        throw SpecError("duplicate key '" + tokens[i] + "' in " + path.string());
      current = tokens[i];
      f.values[current];
      ++i;  // skip '='
      continue;
    }
    if (tokens[i] == "=") throw SpecError("stray '=' in " + path.string());
    if (current.empty()) throw SpecError("value before any key in " + path.string());
    f.values[current].push_back(tokens[i]);
  }
  return f;
}

fs::path resolve(const std::string& p, const fs::path& base) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

GroupSpecResult load_group_spec(const std::string& spec, const fs::path& base_dir) {
  GroupSpecResult r;
  r.spec_string = spec;
  if (spec == "circle") {
    r.circle = true;
    return r;
  }
  if (spec.rfind("builtin:", 0) == 0) {
    try {
      BuiltinGroup b = make_builtin(spec.substr(8));
      r.group = b.group;
      r.dual = std::move(b.dual);
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
    return r;
  }
  if (spec.rfind("file:", 0) == 0) {
    r.group = load_group_file(resolve(spec.substr(5), base_dir));
    return r;
  }
  throw SpecError("group spec must be 'circle', 'builtin:NAME', or 'file:PATH', got '" + spec + "'");
}

GroupPtr load_group_file(const fs::path& path) {
  SpecFile f = parse_spec_file(path, "group", {"name", "order", "table", "names"});
  const long long order = f.integer("order");
  if (order < 1 || order > 4096) throw SpecError("group order out of range in " + path.string());
  std::vector<int> table;
  for (long long v : f.integers("table")) table.push_back(static_cast<int>(v));
  std::vector<std::string> names;
  if (f.has("names")) names = f.list("names");
  try {
    return FiniteGroup::from_table(f.one_or("name", path.stem().string()),
                                   static_cast<int>(order), std::move(table), std::move(names));
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string(e.what()) + " in " + path.string());
  }
}

DualSet load_dual_file(const fs::path& path, GroupPtr group) {
  SpecFile f = parse_spec_file(path, "dual", {"order", "dims", "matrices"});
  const long long order = f.integer("order");
  if (order != group->order())
    throw SpecError("dual file order does not match the group in " + path.string());
  const auto dims = f.integers("dims");
  const auto flat = f.reals("matrices");
  std::size_t need = 0;
  for (long long d : dims) {
    if (d < 1 || d > kMaxIrrepDim) throw SpecError("irrep dimension out of range in " + path.string());
    need += 2 * static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
            static_cast<std::size_t>(order);
  }
  if (flat.size() != need)
    throw SpecError("matrices block has " + std::to_string(flat.size()) + " numbers, expected " +
                    std::to_string(need) + " in " + path.string());
  DualSet dual;
  dual.group = std::move(group);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    Irrep irr;
    irr.dim = static_cast<int>(dims[i]);
    irr.label = "irrep" + std::to_string(i);
    for (long long x = 0; x < order; ++x) {
      Eigen::MatrixXcd m(irr.dim, irr.dim);
      for (int a = 0; a < irr.dim; ++a)
        for (int b = 0; b < irr.dim; ++b) {
          m(a, b) = std::complex<double>(flat[pos], flat[pos + 1]);
          pos += 2;
        }
      irr.matrices.push_back(std::move(m));
    }
    irr.trivial = i == 0;
    dual.irreps.push_back(std::move(irr));
  }
  return dual;
}

void write_dual_file(const fs::path& path, const DualSet& dual) {
  std::ostringstream out;
  out << "haarwalk dual v1\n";
  out << "order = " << dual.group->order() << "\n";
  out << "dims =";
  for (const auto& irr : dual.irreps) out << ' ' << irr.dim;
  out << "\nmatrices =\n";
  for (const auto& irr : dual.irreps)
    for (const auto& m : irr.matrices) {
      for (int a = 0; a < irr.dim; ++a)
        for (int b = 0; b < irr.dim; ++b)
          out << fmt(m(a, b).real()) << ' ' << fmt(m(a, b).imag()) << ' ';
      out << "\n";
    }
  write_text_file(path, out.str());
}

namespace {

CircleMeasure circle_measure_from_spec(const SpecFile& f) {
  std::vector<CircleAtom> atoms;
  if (f.has("atoms")) {
    const auto a = f.reals("atoms");
    if (a.size() % 2) throw SpecError("atoms expects location/mass pairs");
    for (std::size_t i = 0; i < a.size(); i += 2) atoms.push_back({a[i], a[i + 1]});
  }
  std::vector<double> breaks, values;
  if (f.has("density-breaks") || f.has("density-values")) {
    breaks = f.reals("density-breaks");
    values = f.reals("density-values");
    if (breaks.size() != values.size())
      throw SpecError("density-breaks and density-values must have equal length");
  }
  try {
    return CircleMeasure::probability(std::move(atoms), std::move(breaks), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

}  // namespace

MeasureSpec load_measure_file(const fs::path& path) {
  SpecFile f = parse_spec_file(path, "measure",
                               {"group", "weights", "atoms", "density-breaks", "density-values"});
  MeasureSpec m;
  m.group = load_group_spec(f.one("group"), f.dir);
  if (m.group.circle) {
    m.circle = circle_measure_from_spec(f);
    return m;
  }
  const auto w = f.reals("weights");
  if (static_cast<int>(w.size()) != m.group.group->order())
    throw SpecError("weights length must equal the group order in " + path.string());
  try {
    m.finite = FiniteMeasure::probability(m.group.group,
                                          Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()));
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string(e.what()) + " in " + path.string());
  }
  return m;
}

FunctionSpec load_function_file(const fs::path& path) {
  SpecFile f = parse_spec_file(path, "function",
                               {"group", "values", "breaks", "fourier", "demean"});
  FunctionSpec out;
  out.group = load_group_spec(f.one("group"), f.dir);
  const bool demean = f.one_or("demean", "false") == "true";
  try {
    if (out.group.circle) {
      if (f.has("fourier")) {
        const auto c = f.reals("fourier");
        if (c.size() % 2) throw SpecError("fourier expects re/im pairs for n = 0..W");
        std::vector<std::complex<double>> coeffs;
        for (std::size_t i = 0; i < c.size(); i += 2) coeffs.emplace_back(c[i], c[i + 1]);
        out.circle = CircleFunction::fourier_series(std::move(coeffs), demean);
      } else {
        out.circle = CircleFunction::piecewise(f.reals("breaks"), f.reals("values"), demean);
      }
      return out;
    }
    const auto v = f.reals("values");
    if (static_cast<int>(v.size()) != out.group.group->order())
      throw SpecError("values length must equal the group order in " + path.string());
    Eigen::VectorXd vals = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    out.finite = demean ? FiniteFunction::demeaned(out.group.group, std::move(vals))
                        : FiniteFunction(out.group.group, std::move(vals));
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string(e.what()) + " in " + path.string());
  }
  return out;
}

WalkSpec load_walk_file(const fs::path& path) {
  SpecFile f = parse_spec_file(path, "walk",
                               {"measure", "function", "steps", "replicas", "seed", "checkpoints",
                                "mode", "cells", "track-lil", "budget"});
  WalkSpec w;
  const std::string mref = f.one("measure");
  const std::string fref = f.one("function");
  if (mref.rfind("file:", 0) != 0 || fref.rfind("file:", 0) != 0)
    throw SpecError("walk config expects measure = file:PATH and function = file:PATH");
  w.measure_path = resolve(mref.substr(5), f.dir);
  w.function_path = resolve(fref.substr(5), f.dir);
  MeasureSpec m = load_measure_file(w.measure_path);
  FunctionSpec fn = load_function_file(w.function_path);
  if (m.group.spec_string != fn.group.spec_string)
    throw SpecError("measure and function reference different groups ('" + m.group.spec_string +
                    "' vs '" + fn.group.spec_string + "')");
  w.group = m.group;
  if (m.group.circle) {
    w.config.instance = CircleWalkInstance{*m.circle, *fn.circle};
  } else {
    // A group file loaded twice yields two objects; rebind the observable to
    // the measure's instance so handle checks see one group.
    FiniteFunction f(m.group.group, fn.finite->values());
    w.config.instance = FiniteWalkInstance{m.group.group, *m.finite, std::move(f)};
  }

  w.config.steps = f.integer("steps");
  w.config.replicas = static_cast<int>(f.integer("replicas"));
  w.config.seed = static_cast<std::uint64_t>(f.integer_or("seed", 0));
  if (f.has("budget")) w.config.budget = f.integer("budget");
  for (long long c : f.integers("checkpoints")) w.config.checkpoints.push_back(c);

  const std::string mode = f.one_or("mode", "walk");
  if (mode == "walk") w.config.mode = StartMode::identity;
  else if (mode == "stationary") w.config.mode = StartMode::stationary;
  else throw SpecError("mode must be 'walk' or 'stationary'");

  const std::string cells = f.one_or("cells", "singletons");
  if (cells == "none") w.config.count_cells = false;
  else if (cells == "singletons") w.config.count_cells = true;
  else if (cells.rfind("arcs:", 0) == 0) {
    w.config.count_cells = true;
    w.config.circle_cells = std::stoi(cells.substr(5));
  } else {
    throw SpecError("cells must be 'singletons', 'arcs:N', or 'none'");
  }

  const std::string lil = f.one_or("track-lil", "off");
  if (lil == "on") w.config.track_lil = true;
  else if (lil == "off") w.config.track_lil = false;
  else throw SpecError("track-lil must be 'on' or 'off'");
  return w;
}

// --- emission ----------------------------------------------------------------

namespace {

Json series_json(const SeriesValue& v) {
  Json j;
  j["value"] = v.divergent ? Json() : Json(v.value);
  j["bound"] = v.bound;
  j["divergent"] = v.divergent;
  return j;
}

Json rate_json(const RateReport& r) {
  Json j;
  j["q"] = r.q;
  j["spectral_term"] = r.spectral_term;
  j["singular_term"] = r.singular_term;
  j["window_tail"] = r.window_tail;
  j["singular_floor"] = r.singular_floor;
  return j;
}

Json be_json(const BeConstant& k) {
  Json j;
  j["degenerate"] = k.degenerate;
  j["lo"] = k.degenerate ? Json() : Json(k.lo);
  j["hi"] = k.degenerate ? Json() : Json(k.hi);
  return j;
}

}  // namespace

std::string analysis_to_json(const AnalysisReport& r) {
  Json j;
  j["schema"] = "haarwalk-analysis-v1";
  j["group"] = r.group_name;
  j["order"] = r.order;
  j["adapted"] = r.adapted;
  j["strictly_aperiodic"] = r.strictly_aperiodic;
  j["abs_component"] = r.abs_component;
  j["rate"] = rate_json(r.rate);
  j["delta"]["divergent"] = r.delta.divergent;
  j["delta"]["value"] = r.delta.divergent ? Json() : Json(r.delta.sum);
  j["delta"]["tail_bound"] = r.delta.tail_bound;
  j["delta"]["k_stop"] = r.delta.k_stop;
  j["c_series"] = series_json(r.c_series);
  j["c_fourier"] = series_json(r.c_fourier);
  j["cross_consistent"] = r.cross_consistent;
  if (r.bracket) {
    j["bracket"]["lo"] = r.bracket->first;
    j["bracket"]["hi"] = r.bracket->second;
    j["bracket"]["contains_c"] = r.bracket_ok;
  } else {
    j["bracket"] = Json();
  }
  j["K"] = be_json(r.K);
  j["K_l2"] = be_json(r.K_l2);
  j["delta_exponent"] = r.delta_exp;
  j["l2_norm"] = r.l2_norm;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string circle_analysis_to_json(const CircleAnalysis& r) {
  Json j;
  j["schema"] = "haarwalk-circle-analysis-v1";
  j["group"] = "circle";
  j["adapted"] = r.adapted;
  j["abs_component"] = r.abs_component;
  j["rate"] = rate_json(r.rate);
  j["window"] = r.window;
  j["c_series"] = series_json(r.c_series);
  j["c_fourier"] = series_json(r.c_fourier);
  j["K"] = be_json(r.K);
  j["delta_exponent"] = r.delta_exp;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string verdicts_to_json(const std::vector<LawVerdict>& verdicts, const std::string& scenario) {
  Json j;
  j["schema"] = "haarwalk-verdicts-v1";
  j["scenario"] = scenario;
  Json arr = Json::array();
  for (const auto& v : verdicts) {
    Json e;
    e["law"] = v.law;
    e["pass"] = v.pass;
    e["degenerate"] = v.degenerate;
    e["statistic"] = v.statistic;
    e["reference_lo"] = v.reference_lo;
    e["reference_hi"] = v.reference_hi;
    e["trend_ok"] = v.trend_ok;
    e["note"] = v.note;
    Json diag = Json::array();
    for (const auto& [n, s] : v.diagnostics) diag.push_back(Json::array({n, s}));
    e["diagnostics"] = diag;
    arr.push_back(e);
  }
  j["verdicts"] = arr;
  return j.dump(2) + "\n";
}

std::string rate_table_csv(const TvSeries& s) {
  std::ostringstream out;
  out << "k,delta_k,delta_k_root\n";
  for (std::size_t i = 0; i < s.table.size(); ++i) {
    const double d = s.table[i];
    const double root = d > 0.0 ? std::pow(d, 1.0 / static_cast<double>(i + 1)) : 0.0;
    out << (i + 1) << ',' << fmt(d) << ',' << fmt(root) << "\n";
  }
  return out.str();
}

std::string sums_to_csv(const TrajectoryBatch& b) {
  std::ostringstream out;
  out << "replica,checkpoint,sum\n";
  for (int r = 0; r < b.replicas; ++r)
    for (std::size_t c = 0; c < b.checkpoints.size(); ++c)
      out << r << ',' << b.checkpoints[c] << ',' << fmt(b.sum_at(r, static_cast<int>(c))) << "\n";
  return out.str();
}

std::string counts_to_csv(const TrajectoryBatch& b) {
  std::ostringstream out;
  out << "replica,cell,count\n";
  for (int r = 0; r < b.replicas; ++r)
    for (int c = 0; c < b.n_cells; ++c) out << r << ',' << c << ',' << b.count_at(r, c) << "\n";
  return out.str();
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open input for digest: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_json(const std::string& command, std::uint64_t seed,
                          const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs) {
  Json j;
  j["schema"] = "haarwalk-manifest-v1";
  j["tool"] = "haar-walk";
  j["version"] = "1.0.0";
  j["command"] = command;
  j["seed"] = seed;
  Json ins = Json::array();
  for (const auto& p : inputs) {
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(p)));
    Json e;
    e["path"] = p.string();
    e["fnv1a64"] = digest;
    ins.push_back(e);
  }
  j["inputs"] = ins;
  Json outs = Json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  j["outputs"] = outs;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  j["timestamp_unix"] = static_cast<long long>(now);
  return j.dump(2) + "\n";
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace haarwalk
