#include "klcells/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "klcells/error.hpp"
#include "klcells/verify.hpp"

namespace klcells::cli {
namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string type;
  std::string matrix_file;
  std::size_t element_cap = kDefaultElementCap;
  unsigned jobs = 1;
  std::string format = "json";
  std::string cache_dir;
  std::vector<std::string> weights;
  std::vector<std::string> flags;
  std::string side;
  std::string elements;
  bool symmetrize = false;
  std::int64_t max_denominator = 4;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::string cache_action;
  bool list_elements = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw UsageError("invalid integer '" + s + "' in " + what);
  return v;
}

std::shared_ptr<const CoxeterSystem> load_system(const RunConfig& cfg) {
  if (!cfg.type.empty() && !cfg.matrix_file.empty()) throw UsageError("give either --type or --matrix, not both");
  if (!cfg.matrix_file.empty()) {
    std::ifstream in(cfg.matrix_file);
    if (!in) throw UsageError("cannot read matrix file " + cfg.matrix_file);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("matrix file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.contains("generators") || !doc.contains("matrix"))
      throw UsageError("matrix file needs \"generators\" and \"matrix\" fields");
    try {
      return std::make_shared<const CoxeterSystem>(CoxeterSystem::from_matrix(
          doc["generators"].get<std::vector<std::string>>(), doc["matrix"].get<CoxeterMatrix>(), cfg.element_cap));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("malformed matrix file: " + std::string(e.what()));
    }
  }
  if (cfg.type.empty()) throw UsageError("a group is required: --type NAME or --matrix FILE");
  return std::make_shared<const CoxeterSystem>(CoxeterSystem::from_type(cfg.type, cfg.element_cap));
}

// "s=1,t=2": one integer per class, named by class or by any generator in it.
PositiveSubset parse_weights(const CoxeterSystem& sys, const std::string& text) {
  const std::size_t d = sys.num_classes();
  Form form(d, 0);
  std::vector<char> given(d, 0);
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("weight '" + item + "' is not of the form name=value");
    const std::string name = item.substr(0, eq);
    std::optional<int> cls = sys.find_class(name);
    if (!cls) {
      if (auto g = sys.find_generator(name)) cls = sys.class_of(*g);
    }
    if (!cls) throw UsageError("unknown class or generator '" + name + "' in --weights");
    const auto v = parse_int(item.substr(eq + 1), "--weights");
    if (given[*cls] && form[*cls] != v) throw UsageError("conflicting weights for class " + sys.class_names()[*cls]);
    form[*cls] = v;
    given[*cls] = 1;
  }
  for (std::size_t c = 0; c < d; ++c)
    if (!given[c]) throw UsageError("--weights is missing class " + sys.class_names()[c]);
  return PositiveSubset::canonicalize(d, {form});
}

// "1,2;0,1": rows are forms on the classes in name order.
PositiveSubset parse_flag(const CoxeterSystem& sys, const std::string& text) {
  std::vector<Form> forms;
  for (const auto& row : split(text, ';')) {
    if (row.empty()) continue;
    Form f;
    for (const auto& x : split(row, ',')) f.push_back(parse_int(x, "--flag"));
    if (f.size() != sys.num_classes())
      throw UsageError("--flag rows need " + std::to_string(sys.num_classes()) + " entries");
    forms.push_back(std::move(f));
  }
  return PositiveSubset::canonicalize(sys.num_classes(), forms);
}

std::vector<PositiveSubset> load_parameters(const CoxeterSystem& sys, const RunConfig& cfg) {
  std::vector<PositiveSubset> out;
  for (const auto& w : cfg.weights) out.push_back(parse_weights(sys, w));
  for (const auto& f : cfg.flags) out.push_back(parse_flag(sys, f));
  if (out.empty()) out.push_back(PositiveSubset::from_form(Form(sys.num_classes(), 1)));
  return out;
}

PositiveSubset load_parameter(const CoxeterSystem& sys, const RunConfig& cfg) {
  auto all = load_parameters(sys, cfg);
  if (all.size() != 1) throw UsageError("give exactly one of --weights or --flag");
  return all.front();
}

Arrangement load_arrangement(const CoxeterSystem& sys, const RunConfig& cfg) {
  if (cfg.elements.empty()) throw UsageError("--elements is required");
  std::vector<LatticeElement> es;
  for (const auto& e : split(cfg.elements, ',')) es.push_back(parse_element(e, sys));
  if (cfg.symmetrize) es = Arrangement::symmetrize(es);
  return Arrangement(sys.num_classes(), std::move(es));
}

std::vector<CellSide> load_sides(const RunConfig& cfg, std::vector<CellSide> fallback) {
  if (cfg.side.empty()) return fallback;
  return {parse_side(cfg.side)};
}

json word_json(const CoxeterSystem& sys, Element w) {
  json a = json::array();
  for (int s : sys.word(w)) a.push_back(sys.generator_names()[s]);
  return a;
}

json form_json(const Form& f) { return json(f); }

json parameter_json(const CoxeterSystem& sys, const PositiveSubset& x) {
  json j;
  json flag = json::array();
  for (const auto& f : x.flag()) flag.push_back(form_json(f));
  j["flag"] = std::move(flag);
  json w = json::object();
  for (std::size_t c = 0; c < sys.num_classes(); ++c)
    w[sys.class_names()[c]] = x.embed(LatticeElement::basis(sys.num_classes(), c));
  j["weights"] = std::move(w);
  return j;
}

json header(const std::string& command, const CoxeterSystem& sys) {
  json j;
  j["schema"] = "klcells/1";
  j["command"] = command;
  j["group"] = sys.catalog_type() ? *sys.catalog_type() : std::string("custom");
  return j;
}

std::string text_of_block(const CoxeterSystem& sys, const std::vector<Element>& b) {
  std::string s = "{";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? ", " : "") + sys.format(b[i]);
  return s + "}";
}

EngineOptions engine_options(const RunConfig& cfg) {
  EngineOptions o;
  o.jobs = cfg.jobs;
  if (const char* env = std::getenv("KLCELLS_CACHE_DIR"); env && *env) {
    o.cache_dir = std::filesystem::path(env);
  } else if (!cfg.cache_dir.empty()) {
    o.cache_dir = std::filesystem::path(cfg.cache_dir);
  }
  return o;
}

struct Result {
  int code = kOk;
  json doc;
  std::string text;
};

Result cmd_group(const RunConfig& cfg) {
  const auto sys = load_system(cfg);
  Result r;
  r.doc = header("group", *sys);
  r.doc["generators"] = sys->generator_names();
  json classes = json::object();
  for (std::size_t c = 0; c < sys->num_classes(); ++c) {
    json g = json::array();
    for (int s : sys->classes()[c]) g.push_back(sys->generator_names()[s]);
    classes[sys->class_names()[c]] = std::move(g);
  }
  r.doc["classes"] = std::move(classes);
  r.doc["matrix"] = sys->matrix();
  r.doc["order"] = sys->size();
  r.doc["longest"] = word_json(*sys, sys->longest());
  r.doc["conjugacy_classes"] = sys->conjugacy_classes().size();
  std::ostringstream t;
  t << r.doc["group"].get<std::string>() << ": order " << sys->size() << ", " << sys->rank() << " generators, "
    << sys->num_classes() << " generator classes, " << sys->conjugacy_classes().size() << " conjugacy classes\n";
  t << "longest element " << sys->format(sys->longest()) << " (length " << sys->max_length() << ")\n";
  if (cfg.list_elements) {
    json elems = json::array();
    for (std::size_t i = 0; i < sys->size(); ++i) {
      const auto w = sys->element(i);
      json e;
      e["word"] = word_json(*sys, w);
      e["length"] = sys->length(w);
      e["length_vector"] = sys->length_vector(w);
      elems.push_back(std::move(e));
      t << "  " << sys->format(w) << "\n";
    }
    r.doc["elements"] = std::move(elems);
  }
  r.text = t.str();
  return r;
}

Result cmd_cells(const RunConfig& cfg) {
  const auto sys = load_system(cfg);
  const auto x = load_parameter(*sys, cfg);
  CellEngine engine(sys, engine_options(cfg));
  const auto side = load_sides(cfg, {CellSide::Left}).front();
  const auto& p = engine.cells(x, side);
  Result r;
  r.doc = header("cells", *sys);
  r.doc["parameter"] = parameter_json(*sys, x);
  r.doc["partition"] = partition_json(*sys, p);
  r.doc["cell_count"] = p.blocks.size();
  r.doc["fingerprint"] = partition_fingerprint(*sys, p);
  std::ostringstream t;
  t << side_name(p.side) << " cells at " << x.to_string() << ": " << p.blocks.size() << "\n";
  for (const auto& b : p.blocks) t << "  " << text_of_block(*sys, b) << "\n";
  r.text = t.str();
  return r;
}

Result cmd_facets(const RunConfig& cfg) {
  const auto sys = load_system(cfg);
  const auto arr = load_arrangement(*sys, cfg);
  Result r;
  r.doc = header("facets", *sys);
  json es = json::array();
  for (const auto& e : arr.elements()) es.push_back(format_element(e, sys->class_names()));
  r.doc["elements"] = std::move(es);
  json fs = json::array();
  std::ostringstream t;
  t << arr.facets().size() << " facets, " << arr.chambers().size() << " chambers\n";
  for (const auto& f : arr.facets()) {
    json j;
    j["signs"] = f.signs.to_string();
    j["representative_form"] = form_json(f.representative_form);
    j["dimension"] = f.dimension;
    j["chamber"] = f.is_chamber();
    fs.push_back(std::move(j));
    t << "  " << f.signs.to_string() << "  dim " << f.dimension << "  " << f.representative.to_string() << "\n";
  }
  r.doc["facet_count"] = arr.facets().size();
  r.doc["facets"] = std::move(fs);
  r.text = t.str();
  return r;
}

Result cmd_verify_a(const RunConfig& cfg) {
  const auto sys = load_system(cfg);
  const auto arr = load_arrangement(*sys, cfg);
  CellEngine engine(sys, engine_options(cfg));
  const auto sides = load_sides(cfg, {CellSide::Left, CellSide::Right, CellSide::TwoSided});
  const std::size_t k = cfg.samples ? cfg.samples : 3;
  Result r;
  r.doc = header("verify-a", *sys);
  json reports = json::array();
  std::ostringstream t;
  bool all_ok = true;
  for (std::size_t i = 0; i < arr.facets().size(); ++i) {
    const auto rep = verify_facet(engine, arr, i, k, sides);
    all_ok = all_ok && rep.ok();
    json j;
    j["signs"] = rep.signs.to_string();
    j["dimension"] = rep.dimension;
    json w = json::array();
    for (const auto& x : rep.witnesses) w.push_back(x.to_string());
    j["witnesses"] = std::move(w);
    json sides_json = json::array();
    for (const auto& s : rep.sides) {
      json sj;
      sj["side"] = side_name(s.side);
      sj["constancy_ok"] = s.constancy_ok;
      sj["sup_ok"] = s.sup_ok;
      sj["cells"] = s.cells;
      sides_json.push_back(std::move(sj));
      t << (s.constancy_ok && s.sup_ok ? "PASS " : "FAIL ") << rep.signs.to_string() << " " << side_name(s.side)
        << " constancy=" << s.constancy_ok << " sup=" << s.sup_ok << " cells=" << s.cells << "\n";
    }
    j["sides"] = std::move(sides_json);
    j["ok"] = rep.ok();
    reports.push_back(std::move(j));
  }
  r.doc["facets"] = std::move(reports);
  r.doc["note"] = "constancy is checked on the listed witnesses only";
  r.doc["ok"] = all_ok;
  r.code = all_ok ? kOk : kCheckFailed;
  r.text = t.str();
  return r;
}

Result cmd_verify_bminus(const RunConfig& cfg) {
  const auto sys = load_system(cfg);
  const auto arr = load_arrangement(*sys, cfg);
  CellEngine engine(sys, engine_options(cfg));
  const auto sides = load_sides(cfg, {CellSide::Left, CellSide::Right});
  Result r;
  r.doc = header("verify-bminus", *sys);
  json checks = json::array();
  std::ostringstream t;
  bool all_ok = true;
  for (const auto& f : arr.facets())
    for (auto c : arr.adjacent_chambers(f))
      for (auto side : sides) {
        const auto& chamber = arr.facets()[c];
        const auto o = check_bminus(engine, arr, f, chamber, side);
        all_ok = all_ok && o == BMinusOutcome::Pass;
        json j;
        j["facet"] = f.signs.to_string();
        j["chamber"] = chamber.signs.to_string();
        j["side"] = side_name(side);
        j["outcome"] = outcome_name(o);
        checks.push_back(std::move(j));
        t << outcome_name(o) << " " << f.signs.to_string() << " <= " << chamber.signs.to_string() << " "
          << side_name(side) << "\n";
      }
  r.doc["checks"] = std::move(checks);
  r.doc["ok"] = all_ok;
  r.code = all_ok ? kOk : kCheckFailed;
  r.text = t.str();
  return r;
}

Result cmd_scan(const RunConfig& cfg) {
  const auto sys = load_system(cfg);
  CellEngine engine(sys, engine_options(cfg));
  const auto rep = scan_walls_rank2(engine, cfg.max_denominator);
  Result r;
  r.doc = header("scan", *sys);
  r.doc["classes"] = rep.class_names;
  r.doc["max_denominator"] = cfg.max_denominator;
  json slopes = json::array();
  std::ostringstream t;
  for (std::size_t i = 0; i < rep.slopes.size(); ++i) {
    json j;
    j["slope"] = rep.slopes[i].to_string();
    j["weights"] = {rep.slopes[i].q, rep.slopes[i].p};
    j["cells"] = rep.cell_counts[i];
    j["fingerprint"] = rep.fingerprints[i];
    slopes.push_back(std::move(j));
    t << rep.slopes[i].to_string() << "\t" << rep.cell_counts[i] << " cells\t" << rep.fingerprints[i].substr(0, 12)
      << "\n";
  }
  r.doc["slopes"] = std::move(slopes);
  json walls = json::array();
  t << "walls:";
  for (const auto& w : rep.walls) {
    walls.push_back(w.to_string());
    t << " " << w.to_string();
  }
  t << "\n";
  r.doc["walls"] = std::move(walls);
  r.doc["constant_between_walls"] = rep.constant_between_walls;
  r.doc["fingerprints_constant_between_walls"] = rep.fingerprints_constant_between_walls;
  r.code = rep.constant_between_walls ? kOk : kCheckFailed;
  r.text = t.str();
  return r;
}

Result cmd_invariances(const RunConfig& cfg) {
  const auto sys = load_system(cfg);
  CellEngine engine(sys, engine_options(cfg));
  const auto rep = check_invariances(engine, cfg.samples ? cfg.samples : 20, cfg.seed);
  Result r;
  r.doc = header("invariances", *sys);
  r.doc["samples"] = cfg.samples ? cfg.samples : 20;
  r.doc["seed"] = cfg.seed;
  json items = json::array();
  std::ostringstream t;
  for (const auto& it : rep.items) {
    json j;
    j["name"] = it.name;
    j["checked"] = it.checked;
    j["failures"] = it.failures;
    items.push_back(std::move(j));
    t << (it.failures.empty() ? "PASS " : "FAIL ") << it.name << " (" << it.checked << " checks, "
      << it.failures.size() << " failures)\n";
  }
  r.doc["checks"] = std::move(items);
  r.doc["ok"] = rep.ok();
  r.code = rep.ok() ? kOk : kCheckFailed;
  r.text = t.str();
  return r;
}

Result cmd_cache(const RunConfig& cfg) {
  const auto opts = engine_options(cfg);
  if (!opts.cache_dir) throw UsageError("cache needs --cache-dir or KLCELLS_CACHE_DIR");
  TableCache cache(*opts.cache_dir);
  Result r;
  r.doc["schema"] = "klcells/1";
  r.doc["command"] = "cache";
  r.doc["action"] = cfg.cache_action;
  r.doc["directory"] = opts.cache_dir->string();
  std::ostringstream t;
  if (cfg.cache_action == "stat") {
    json entries = json::array();
    for (const auto& e : cache.list()) {
      json j;
      j["file"] = e.file;
      j["context"] = e.fingerprint;
      j["bytes"] = e.bytes;
      entries.push_back(std::move(j));
      t << e.file << "\t" << e.bytes << "\t" << e.fingerprint << "\n";
    }
    r.doc["entries"] = std::move(entries);
    t << r.doc["entries"].size() << " entries\n";
  } else if (cfg.cache_action == "clear") {
    const auto removed = cache.clear();
    r.doc["removed"] = removed;
    t << removed << " removed\n";
  } else if (cfg.cache_action == "warm") {
    const auto sys = load_system(cfg);
    json warmed = json::array();
    for (const auto& x : load_parameters(*sys, cfg)) {
      bool hit = false;
      cache.get(HeckeContext::specialize(sys, x), KLOptions{cfg.jobs}, &hit);
      json j;
      j["parameter"] = x.to_string();
      j["hit"] = hit;
      warmed.push_back(std::move(j));
      t << (hit ? "hit   " : "built ") << x.to_string() << "\n";
    }
    r.doc["group"] = sys->catalog_type() ? *sys->catalog_type() : std::string("custom");
    r.doc["warmed"] = std::move(warmed);
  } else {
    throw UsageError("cache action must be stat, clear or warm");
  }
  r.text = t.str();
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Kazhdan-Lusztig cells with unequal parameters", "klcells"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto group_opts = [&](CLI::App* sub) {
    sub->add_option("--type", cfg.type, "Catalog type: A1..A4, B2..B4, D4, F4, I2:m");
    sub->add_option("--matrix", cfg.matrix_file, "JSON file {\"generators\": [...], \"matrix\": [[...]]}");
    sub->add_option("--element-cap", cfg.element_cap, "Abort enumeration beyond this many elements")
        ->check(CLI::PositiveNumber);
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--cache-dir", cfg.cache_dir, "KL table cache directory (KLCELLS_CACHE_DIR overrides)");
  };
  auto param_opts = [&](CLI::App* sub) {
    sub->add_option("--weights", cfg.weights, "Class weights, e.g. s=1,t=2");
    sub->add_option("--flag", cfg.flags, "Flag of forms, rows separated by ';', e.g. \"1,2;0,1\"");
  };
  auto arrangement_opts = [&](CLI::App* sub) {
    sub->add_option("--elements", cfg.elements, "Comma-separated lattice elements, e.g. s,t,t-s,t+s");
    sub->add_flag("--symmetrize", cfg.symmetrize, "Add the negatives of the elements");
  };

  auto* group = app.add_subcommand("group", "Describe a Coxeter group");
  group_opts(group);
  group->add_flag("--list", cfg.list_elements, "List every element");

  auto* cells = app.add_subcommand("cells", "Cell partition for one parameter");
  group_opts(cells);
  param_opts(cells);
  cells->add_option("--side", cfg.side, "left, right or two-sided");

  auto* facets = app.add_subcommand("facets", "Facets of a hyperplane arrangement");
  group_opts(facets);
  arrangement_opts(facets);

  auto* verify_a = app.add_subcommand("verify-a", "Facet constancy and supremum formula on every facet");
  group_opts(verify_a);
  arrangement_opts(verify_a);
  verify_a->add_option("--side", cfg.side, "Restrict to one side");
  verify_a->add_option("--samples", cfg.samples, "Witnesses per facet (default 3)");

  auto* verify_b = app.add_subcommand("verify-bminus", "Character sums on facet/chamber pairs");
  group_opts(verify_b);
  arrangement_opts(verify_b);
  verify_b->add_option("--side", cfg.side, "left or right");

  auto* scan = app.add_subcommand("scan", "Rank-2 wall scan over slopes phi(t)/phi(s)");
  group_opts(scan);
  scan->add_option("--max-denominator", cfg.max_denominator, "Grid bound D")->check(CLI::PositiveNumber);

  auto* inv = app.add_subcommand("invariances", "Randomized invariance checks");
  group_opts(inv);
  inv->add_option("--samples", cfg.samples, "Random draws (default 20)");
  inv->add_option("--seed", cfg.seed, "Random seed");

  auto* cache = app.add_subcommand("cache", "KL table cache administration");
  group_opts(cache);
  param_opts(cache);
  cache->add_option("action", cfg.cache_action, "stat, clear or warm")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    Result r;
    if (*group) r = cmd_group(cfg);
    else if (*cells) r = cmd_cells(cfg);
    else if (*facets) r = cmd_facets(cfg);
    else if (*verify_a) r = cmd_verify_a(cfg);
    else if (*verify_b) r = cmd_verify_bminus(cfg);
    else if (*scan) r = cmd_scan(cfg);
    else if (*inv) r = cmd_invariances(cfg);
    else r = cmd_cache(cfg);
    out << (cfg.format == "text" ? r.text : r.doc.dump(2) + "\n");
    return r.code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kUsage;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace klcells::cli
