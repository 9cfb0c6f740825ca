#include "rpfkit/modelfile.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace rpfkit {
namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& what) { fail(errc::parse_error, what); }

const json& need(const json& j, const char* key, const char* section) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(section) + " is missing the \"" + key + "\" field");
  return *it;
}

double finite_number(const json& v, const char* what) {
  if (!v.is_number()) bad(std::string(what) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(std::string(what) + " must be finite");
  return d;
}

int integer(const json& v, const char* what) {
  if (!v.is_number_integer()) bad(std::string(what) + " must be an integer");
  return v.get<int>();
}

std::string text(const json& v, const char* what) {
  if (!v.is_string()) bad(std::string(what) + " must be a string");
  return v.get<std::string>();
}

const json& array(const json& v, const char* what) {
  if (!v.is_array()) bad(std::string(what) + " must be an array");
  return v;
}

const json& object(const json& v, const char* what) {
  if (!v.is_object()) bad(std::string(what) + " must be an object");
  return v;
}

int symbol_index(const std::map<std::string, int>& index, const std::string& name) {
  auto it = index.find(name);
  if (it == index.end()) fail(errc::unknown_symbol, "undeclared symbol \"" + name + "\"");
  return it->second;
}

Word parse_word(const std::map<std::string, int>& index, const std::string& key) {
  Word w;
  std::istringstream in(key);
  std::string token;
  while (in >> token) w.push_back(symbol_index(index, token));
  if (w.empty()) bad("empty word key");
  return w;
}

/// Pattern value: the string "all", or an array of 1-based indices / "bK"
/// symbol names.
ColumnPattern parse_pattern(const json& v, const char* what) {
  if (v.is_string()) {
    if (v.get<std::string>() == "all") return ColumnPattern::every();
    bad(std::string(what) + ": the only named pattern is \"all\"");
  }
  if (!v.is_array()) bad(std::string(what) + " must be \"all\" or an index array");
  std::vector<int> idx;
  for (const json& e : v) {
    if (e.is_number_integer()) {
      idx.push_back(e.get<int>());
    } else if (e.is_string()) {
      const std::string name = e.get<std::string>();
      int k = 0;
      if (std::sscanf(name.c_str(), "b%d", &k) != 1)
        bad(std::string(what) + ": symbol names in patterns look like \"b3\"");
      idx.push_back(k);
    } else {
      bad(std::string(what) + " entries must be indices or \"bK\" names");
    }
  }
  return ColumnPattern::list(std::move(idx));
}

SubshiftModel parse_finite_model(const json& j, std::map<std::string, int>& index) {
  const json& al = object(need(j, "alphabet", "the document"), "alphabet");
  const json& names_j = array(need(al, "symbols", "alphabet"), "alphabet.symbols");
  const json& coords_j = array(need(al, "coords", "alphabet"), "alphabet.coords");
  std::vector<std::string> names;
  std::vector<double> coords;
  for (const json& e : names_j) names.push_back(text(e, "alphabet symbol"));
  for (const json& e : coords_j) coords.push_back(finite_number(e, "alphabet coordinate"));
  if (names.size() != coords.size()) bad("alphabet symbols and coords differ in length");
  const int n = static_cast<int>(names.size());
  for (int i = 0; i < n; ++i) {
    if (!index.emplace(names[static_cast<std::size_t>(i)], i).second)
      bad("duplicate symbol \"" + names[static_cast<std::size_t>(i)] + "\"");
  }

  const json& adm = object(need(j, "admissibility", "the document"), "admissibility");
  const bool has_pairs = adm.contains("pairs");
  const bool has_matrix = adm.contains("matrix");
  if (has_pairs == has_matrix)
    bad("admissibility needs exactly one of \"pairs\", \"matrix\", \"tail_spec\"");
  std::vector<std::uint8_t> mat(static_cast<std::size_t>(n) * n, 0);
  if (has_pairs) {
    for (const json& e : array(adm["pairs"], "admissibility.pairs")) {
      const json& pair = array(e, "admissible pair");
      if (pair.size() != 2) bad("admissible pairs have exactly two symbols");
      const int a = symbol_index(index, text(pair[0], "pair symbol"));
      const int b = symbol_index(index, text(pair[1], "pair symbol"));
      mat[static_cast<std::size_t>(a) * n + b] = 1;
    }
  } else {
    const json& rows = array(adm["matrix"], "admissibility.matrix");
    if (static_cast<int>(rows.size()) != n) bad("admissibility matrix must have one row per symbol");
    for (int a = 0; a < n; ++a) {
      const json& row = array(rows[static_cast<std::size_t>(a)], "admissibility matrix row");
      if (static_cast<int>(row.size()) != n)
        bad("admissibility matrix rows must have one entry per symbol");
      for (int b = 0; b < n; ++b) {
        const int e = integer(row[static_cast<std::size_t>(b)], "admissibility matrix entry");
        if (e != 0 && e != 1) bad("admissibility matrix entries are 0 or 1");
        mat[static_cast<std::size_t>(a) * n + b] = static_cast<std::uint8_t>(e);
      }
    }
  }

  const json& ap = object(need(j, "apriori", "the document"), "apriori");
  if (!ap.contains("weights")) bad("a finite model takes apriori weights, not a rule");
  std::vector<double> weights;
  for (const json& e : array(ap["weights"], "apriori.weights"))
    weights.push_back(finite_number(e, "apriori weight"));
  if (static_cast<int>(weights.size()) != n) bad("one apriori weight per symbol");

  return SubshiftModel::build(Alphabet::make(std::move(names), std::move(coords)),
                              AdmissibilityModel::make(n, std::move(mat)),
                              AprioriMeasure::make(std::move(weights)));
}

Potential parse_finite_potential(const json& j, const SubshiftModel& model,
                                 const std::map<std::string, int>& index) {
  const json& pot = object(need(j, "potential", "the document"), "potential");
  if (!pot.contains("table")) bad("a finite model takes a potential table, not a rule");
  const int depth = integer(need(pot, "depth", "potential"), "potential.depth");
  if (depth < 1) bad("potential.depth must be at least 1");
  std::map<Word, double> table;
  for (const auto& [key, value] : object(pot["table"], "potential.table").items()) {
    Word w = parse_word(index, key);
    if (static_cast<int>(w.size()) != depth) bad("potential key \"" + key + "\" is not depth " +
                                                 std::to_string(depth));
    table[std::move(w)] = finite_number(value, "potential value");
  }
  return Potential::from_table(model, depth, std::move(table), "model file");
}

TailMatrixSpec parse_tail_spec(const json& adm, const json& ap) {
  const json& ts = object(adm.at("tail_spec"), "admissibility.tail_spec");
  TailMatrixSpec spec;
  spec.j0 = integer(need(ts, "j0", "tail_spec"), "tail_spec.j0");
  if (ts.contains("head_columns"))
    for (const json& e : array(ts["head_columns"], "tail_spec.head_columns"))
      spec.head_columns.push_back(parse_pattern(e, "head column pattern"));
  spec.tail_column = parse_pattern(need(ts, "tail_column", "tail_spec"), "tail column pattern");

  if (!ap.contains("rule")) bad("a tail system takes an apriori rule, not explicit weights");
  const json& rule = object(ap["rule"], "apriori.rule");
  if (text(need(rule, "kind", "apriori.rule"), "apriori rule kind") != "geometric")
    bad("the only apriori rule kind is \"geometric\"");
  spec.weights.ratio = finite_number(need(rule, "ratio", "apriori.rule"), "geometric ratio");
  spec.validate();
  return spec;
}

CmsPotentialRule parse_potential_rule(const json& j) {
  const json& pot = object(need(j, "potential", "the document"), "potential");
  if (!pot.contains("rule")) bad("a tail system takes a potential rule, not a table");
  const json& rule = object(pot["rule"], "potential.rule");
  const std::string kind = text(need(rule, "kind", "potential.rule"), "potential rule kind");
  if (kind == "table") {
    std::vector<double> head;
    if (rule.contains("head"))
      for (const json& e : array(rule["head"], "potential.rule.head"))
        head.push_back(finite_number(e, "potential head value"));
    const double tail = finite_number(need(rule, "tail", "potential.rule"), "potential tail value");
    return CmsPotentialRule::table(std::move(head), tail);
  }
  if (kind == "coord-linear")
    return CmsPotentialRule::linear(
        finite_number(need(rule, "beta", "potential.rule"), "potential beta"));
  bad("potential rule kinds are \"table\" and \"coord-linear\"");
}

CylinderMeasure parse_trial(const json& t, const SubshiftModel& model,
                            const std::map<std::string, int>& index) {
  std::map<Word, double> full;
  int depth = 0;
  for (const auto& [key, value] : object(need(object(t, "trial"), "masses", "trial"),
                                         "trial.masses")
                                      .items()) {
    Word w = parse_word(index, key);
    if (depth == 0) depth = static_cast<int>(w.size());
    if (static_cast<int>(w.size()) != depth) bad("trial masses must share one word length");
    full[std::move(w)] = finite_number(value, "trial mass");
  }
  if (depth == 0) bad("a trial needs at least one mass");

  CylinderMeasure nu;
  nu.depth = depth;
  nu.invariant = true;  // offered as invariant; the audit enforces it
  nu.masses = std::move(full);
  for (int len = depth - 1; len >= 1; --len) {
    for (const Word& w : enumerate_words(model, len)) {
      double sum = 0.0;
      for (int b : model.adm.successors[static_cast<std::size_t>(w.back())]) {
        Word ext = w;
        ext.push_back(b);
        auto it = nu.masses.find(ext);
        if (it != nu.masses.end()) sum += it->second;
      }
      if (sum != 0.0) nu.masses[w] = sum;
    }
  }
  return nu;
}

void parse_run(const json& j, ModelFile& mf) {
  if (!j.contains("run")) return;
  const json& run = object(j["run"], "run");
  if (run.contains("tol")) {
    mf.run.tol = finite_number(run["tol"], "run.tol");
    if (!(mf.run.tol > 0.0)) bad("run.tol must be positive");
  }
  if (run.contains("max_iter")) {
    mf.run.max_iter = integer(run["max_iter"], "run.max_iter");
    if (mf.run.max_iter < 1) bad("run.max_iter must be at least 1");
  }
  if (run.contains("depth")) {
    mf.run.depth = integer(run["depth"], "run.depth");
    if (mf.run.depth < 1) bad("run.depth must be at least 1");
  }
  if (run.contains("t_list")) {
    mf.run.t_list.clear();
    for (const json& e : array(run["t_list"], "run.t_list"))
      mf.run.t_list.push_back(finite_number(e, "run.t_list entry"));
  }
  if (run.contains("method")) {
    mf.run.method = text(run["method"], "run.method");
    if (mf.run.method != "aggregate" && mf.run.method != "truncate-sweep")
      bad("run.method is \"aggregate\" or \"truncate-sweep\"");
  }
  if (run.contains("levels")) {
    mf.run.levels.clear();
    for (const json& e : array(run["levels"], "run.levels"))
      mf.run.levels.push_back(integer(e, "run.levels entry"));
  }
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

ModelFile parse_model_file(const std::string& text_in) {
  json j;
  try {
    j = json::parse(text_in);
  } catch (const json::exception& e) {
    bad(std::string("invalid document: ") + e.what());
  }
  try {
    if (!j.is_object()) bad("the document root must be an object");
    ModelFile mf;
    mf.digest = fnv1a_hex(text_in);

    const json& adm = object(need(j, "admissibility", "the document"), "admissibility");
    mf.countable = adm.contains("tail_spec");
    if (mf.countable) {
      if (adm.contains("pairs") || adm.contains("matrix") || j.contains("alphabet"))
        bad("a tail system derives its alphabet; drop the finite sections");
      mf.tail = parse_tail_spec(adm, object(need(j, "apriori", "the document"), "apriori"));
      mf.rule = parse_potential_rule(j);
      parse_run(j, mf);
      if (j.contains("run") && j["run"].contains("trials"))
        bad("trial measures require a finite model");
      return mf;
    }

    std::map<std::string, int> index;
    mf.model = parse_finite_model(j, index);
    mf.phi = parse_finite_potential(j, mf.model, index);
    parse_run(j, mf);
    if (j.contains("run") && j["run"].contains("trials"))
      for (const json& t : array(j["run"]["trials"], "run.trials"))
        mf.trials.push_back(parse_trial(t, mf.model, index));
    return mf;
  } catch (const json::exception& e) {
    bad(std::string("invalid document: ") + e.what());
  }
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read model file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_file(buf.str());
}

}  // namespace rpfkit
