#include "fusion/cli.hpp"

#include "fusion/assembly.hpp"
#include "fusion/harmonic.hpp"
#include "fusion/io.hpp"
#include "fusion/numkernel.hpp"
#include "fusion/random.hpp"
#include "fusion/resolution.hpp"
#include "fusion/structure.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fusion::cli {

namespace {

struct Common {
  std::string out_path;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct Options {
  Common common;
  std::string input;
  std::string vector_file;
  std::string vectors_file;
  std::string locals_file;
  std::string window_file;
  std::string property;
  std::string construction = "frame-operator";
  std::string mode;
  std::size_t probes = 100;
  std::size_t samples = 200;
  std::optional<double> l2_bound;
  double lower_required = 0.0;
  double upper_required = std::numeric_limits<double>::infinity();
  Index length = 0;
  Index q = 1;
  Index block_dim = 0, blocks = 0, repeats = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_path, "Also write the report to this file");
  sub->add_option("--tol", c.tol, "Check tolerance (default 1e-9)")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Seed for randomized certificates (default 0)");
}

Tolerances tolerances(const Common& c) {
  Tolerances t;
  t.check = c.tol;
  return t;
}

Json tolerances_json(const Tolerances& t) {
  return {{"rank", t.rank}, {"frame", t.frame}, {"check", t.check}, {"slack", t.slack}, {"subspace", t.subspace}};
}

class Reporter {
 public:
  Reporter(const Common& c, std::ostream& out) : common_(c), out_(out) {}

  int emit(Json report, int code, const std::vector<std::size_t>& reorthonormalized = {}) const {
    report["provenance"] = {{"version", kVersion},
                            {"seed", common_.seed},
                            {"tolerances", tolerances_json(tolerances(common_))},
                            {"reorthonormalized", reorthonormalized}};
    report["exit_code"] = code;
    const std::string text = dump(report);
    out_ << text << '\n';
    if (!common_.out_path.empty()) {
      std::ofstream f(common_.out_path);
      if (!f) throw std::runtime_error("cannot write " + common_.out_path);
      f << text << '\n';
    }
    return code;
  }

 private:
  const Common& common_;
  std::ostream& out_;
};

template <typename F>
int with_field(const Json& doc, F&& f) {
  if (document_field(doc) == "complex") return f.template operator()<cdouble>();
  return f.template operator()<double>();
}

const char* field_name(bool complex) { return complex ? "complex" : "real"; }

template <FieldScalar S>
Json flags_json(const WeightedFamily<S>& fam, const BoundsReport& b, const Tolerances& tol) {
  const StructureReport s = analyze_structure(fam, tol);
  return {{"frame", b.is_frame},
          {"tight", b.is_tight},
          {"parseval", b.is_parseval},
          {"uniform", b.is_uniform},
          {"onb", b.is_onb},
          {"complete", s.complete},
          {"minimal", s.minimal},
          {"riesz_decomposition", s.riesz_decomposition},
          {"exact", s.exact},
          {"pooled_basis_exact", s.pooled_basis_exact}};
}

template <FieldScalar S>
Json family_header(const WeightedFamily<S>& fam) {
  std::vector<Index> dims;
  for (const auto& it : fam) dims.push_back(it.subspace.dim());
  return {{"ambient_dim", fam.ambient_dim()}, {"field", field_name(is_complex_v<S>)}, {"size", fam.size()}, {"dims", dims},
          {"weights", fam.weights()}};
}

Json frame_bounds_json(const FrameBounds& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"is_frame", b.is_frame}};
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const LoadedFamily<S> lf = parse_family<S>(doc);
    const WeightedFamily<S>& fam = lf.family;
    const BoundsReport b = frame_bounds(fam, tol);
    double weight_sq = 0.0;
    for (double v : fam.weights()) weight_sq += v * v;
    Json r = family_header(fam);
    r["command"] = "analyze";
    r["bounds"] = to_json(b);
    r["eigenvalues"] = to_json(b.eigenvalues);
    r["flags"] = flags_json(fam, b, tol);
    r["certificates"] = to_json(std::vector<Inequality>{check_le("D <= sum v_i^2", b.upper, weight_sq, tol.slack)});
    return Reporter(o.common, out).emit(r, kExitOk, lf.reorthonormalized);
  });
}

int cmd_check(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const LoadedFamily<S> lf = parse_family<S>(doc);
    Json flags = flags_json(lf.family, frame_bounds(lf.family, tol), tol);
    flags["bessel"] = is_bessel(lf.family).is_bessel;
    if (!flags.contains(o.property)) throw InvalidInput("--property: unknown property '" + o.property + "'");
    const bool value = flags[o.property].get<bool>();
    Json r = family_header(lf.family);
    r["command"] = "check";
    r["property"] = o.property;
    r["value"] = value;
    return Reporter(o.common, out).emit(r, value ? kExitOk : kExitFalse, lf.reorthonormalized);
  });
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Json vdoc = load_json_file(o.vector_file);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const LoadedFamily<S> lf = parse_family<S>(doc);
    const Vector<S> f = parse_vector_document<S>(vdoc, lf.family.ambient_dim());
    const Reconstruction<S> rec = reconstruct(lf.family, f, tol);
    Json r = family_header(lf.family);
    r["command"] = "reconstruct";
    r["reconstruction"] = to_json<S>(rec.value);
    r["residual"] = rec.residual;
    r["certificates"] = to_json(std::vector<Inequality>{check_le("relative residual", rec.residual, 0.0, tol.check)});
    return Reporter(o.common, out).emit(r, rec.residual <= tol.check ? kExitOk : kExitFalse, lf.reorthonormalized);
  });
}

int cmd_dual(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const LoadedFamily<S> lf = parse_family<S>(doc);
    const BoundsReport b = frame_bounds(lf.family, tol);
    const WeightedFamily<S> d = dual(lf.family, tol);
    const BoundsReport db = frame_bounds(d, tol);
    Json r = family_header(lf.family);
    r["command"] = "dual";
    r["bounds"] = to_json(b);
    r["dual"] = serialize_family(d);
    r["dual_bounds"] = to_json(db);
    r["dual_eigenvalues"] = to_json(db.eigenvalues);
    return Reporter(o.common, out).emit(r, kExitOk, lf.reorthonormalized);
  });
}

int cmd_assemble(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const GlobalAssembly<S> g = assemble_global(parse_locals<S>(doc), tol);
    const TransferReport& t = g.report;
    Json r = family_header(g.family);
    r["command"] = "assemble";
    r["local_bounds"] = {{"A", t.A}, {"B", t.B}};
    r["bounds"] = {{"C", t.C}, {"D", t.D}};
    r["flat_bounds"] = {{"C_g", t.C_g}, {"D_g", t.D_g}};
    r["pooled_onb_bounds"] = {{"C_e", t.C_e}, {"D_e", t.D_e}};
    r["flags"] = {{"flat_frame", t.flat_is_frame},       {"pooled_onb_frame", t.pooled_onb_is_frame},
                  {"family_frame", t.family_is_frame},   {"flat_parseval", t.flat_is_parseval},
                  {"pooled_onb_parseval", t.pooled_onb_is_parseval}, {"family_parseval", t.family_is_parseval},
                  {"predicates_agree", t.predicates_agree}};
    r["certificates"] = to_json(t.inequalities);
    const bool ok = t.predicates_agree && all_pass(t.inequalities);
    return Reporter(o.common, out).emit(r, ok ? kExitOk : kExitFalse);
  });
}

int cmd_partition(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const PartitionInput<S> p = parse_partition<S>(doc);
    const PartitionCertificate c = partition_certificate(p.vectors, p.partition, tol);
    Json r = {{"command", "partition"}, {"ambient_dim", p.vectors.rows()}, {"field", field_name(is_complex_v<S>)},
              {"vectors", p.vectors.cols()}, {"cells", c.cells}};
    r["vector_bounds"] = {{"A", c.A}, {"B", c.B}};
    r["lambda"] = {{"min", c.lambda_min}, {"max", c.lambda_max}};
    r["certificates"] = to_json(c.inequalities);
    const bool frame = c.A > 0.0;
    r["flags"] = {{"vectors_frame", frame}};
    if (frame) {
      const WeightedFamily<S> fam = from_partition(p.vectors, p.partition, std::vector<double>(p.partition.size(), 1.0), tol);
      const BoundsReport b = frame_bounds(fam, tol);
      r["bounds"] = to_json(b);
      r["eigenvalues"] = to_json(b.eigenvalues);
      r["flags"]["frame"] = b.is_frame;
    }
    return Reporter(o.common, out).emit(r, c.pass ? kExitOk : kExitFalse);
  });
}

int cmd_enrich(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Json vdoc = load_json_file(o.vectors_file);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const LoadedFamily<S> lf = parse_family<S>(doc);
    const Enrichment<S> e = enrich(lf.family, parse_vectors_document<S>(vdoc, lf.family.ambient_dim()), tol);
    Json r = family_header(lf.family);
    r["command"] = "enrich";
    Json locals = Json::array();
    for (const auto& b : e.local_bounds) locals.push_back(frame_bounds_json(b));
    r["local_bounds"] = locals;
    r["local_extremes"] = {{"min_lower", e.min_lower}, {"max_upper", e.max_upper}};
    r["predicted"] = {{"lower", e.predicted_lower}, {"upper", e.predicted_upper}};
    r["flat_bounds"] = frame_bounds_json(e.flat_bounds);
    r["certificates"] = to_json(e.inequalities);
    return Reporter(o.common, out).emit(r, all_pass(e.inequalities) ? kExitOk : kExitFalse, lf.reorthonormalized);
  });
}

Json subset_report_json(const SubsetLowerReport& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    entries.push_back({{"subset", e.subset},
                       {"probe_worst_slack", e.probe_worst_slack},
                       {"eigen_slack", e.eigen_slack},
                       {"pass", e.pass}});
  }
  return {{"D", s.D}, {"seed", s.seed}, {"probes", s.probes}, {"order", "list"},
          {"worst_slack", s.worst_slack}, {"pass", s.pass}, {"subsets", entries}};
}

Json sandwich_json(const SandwichReport& t) {
  Json r = {{"applicable", t.applicable}};
  if (!t.applicable) {
    r["reason"] = t.reason;
    return r;
  }
  r["D"] = t.D;
  r["E"] = t.E;
  r["lambda"] = {{"min", t.lambda_min}, {"max", t.lambda_max}};
  r["lower_holds"] = t.lower_holds;
  r["upper_DE_holds"] = t.upper_DE_holds;
  r["upper_DE2_holds"] = t.upper_DE2_holds;
  r["certificates"] = to_json(t.inequalities);
  return r;
}

int cmd_resolution(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  std::optional<Json> ldoc;
  if (o.construction == "dual-frame") {
    if (o.locals_file.empty()) throw InvalidInput("--locals is required for the dual-frame construction");
    ldoc = load_json_file(o.locals_file);
  }
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const LoadedFamily<S> lf = parse_family<S>(doc);
    const WeightedFamily<S>& fam = lf.family;
    ResolutionResult<S> res;
    if (ldoc) {
      std::vector<LocalFrame<S>> locals;
      for (auto& wl : parse_locals<S>(*ldoc)) locals.push_back(std::move(wl.local));
      res = resolution_from_dual_frame(fam, locals, tol);
    } else {
      res = resolution_from_frame_operator(fam, tol);
    }
    // Scaled form {T_i} with sum v_i^2 T_i = I and unscaled form {v_i^2 T_i}.
    OperatorFamily<S> scaled = res.family, unscaled = res.family;
    for (std::size_t i = 0; i < res.family.size(); ++i) {
      const double v2 = res.family.weights[i] * res.family.weights[i];
      if (res.scaled) {
        unscaled.ops[i] = v2 * res.family.ops[i];
      } else {
        scaled.ops[i] = res.family.ops[i] / v2;
      }
    }
    const auto subsets = fam.size() <= 10 ? all_nonempty_subsets(fam.size()) : [&] {
      std::vector<std::vector<std::size_t>> s;
      std::vector<std::size_t> all;
      for (std::size_t i = 0; i < fam.size(); ++i) {
        s.push_back({i});
        all.push_back(i);
      }
      s.push_back(all);
      return s;
    }();
    const SubsetLowerReport sub = subset_lower_certificate(fam, scaled, subsets, o.probes, o.common.seed, tol);
    const SandwichReport sandwich = quadratic_form_sandwich(fam, scaled, tol);

    Json r = family_header(fam);
    r["command"] = "resolution";
    r["construction"] = o.construction;
    r["defect"] = resolution_defect(res.family, res.scaled);
    r["resolves"] = is_resolution(res.family, res.scaled, tol.check);
    r["lambda"] = {{"min", res.lambda_min}, {"max", res.lambda_max}};
    r["certificates"] = to_json(res.certificate);
    r["subset_lower"] = subset_report_json(sub);
    r["sandwich"] = sandwich_json(sandwich);
    bool ok = r["resolves"].get<bool>() && all_pass(res.certificate) && sub.pass;
    if (sandwich.applicable) ok = ok && sandwich.lower_holds && sandwich.upper_DE2_holds;
    if (o.l2_bound) {
      const L2Report l2 = l2_resolution_certificate(unscaled, *o.l2_bound, &fam, tol);
      r["l2"] = {{"resolves", l2.resolves},
                 {"lambda", {{"min", l2.lambda_min}, {"max", l2.lambda_max}}},
                 {"bound_required", l2.bound_required},
                 {"pass", l2.pass},
                 {"certificates", to_json(l2.inequalities)}};
      ok = ok && l2.pass && all_pass(l2.inequalities);
    }
    return Reporter(o.common, out).emit(r, ok ? kExitOk : kExitFalse, lf.reorthonormalized);
  });
}

template <FieldScalar S>
HarmonicSpec<S> parse_harmonic(const Json& doc) {
  if (!doc.contains("ambient_dim")) throw InvalidInput("ambient_dim: missing field");
  const LoadedFamily<S> seed_doc = parse_family<S>(
      Json{{"ambient_dim", doc["ambient_dim"]}, {"field", document_field(doc)},
           {"subspaces", Json::array({{{"weight", 1.0}, {"basis", doc.value("seed", Json())}}})}});
  const Index n = seed_doc.family.ambient_dim();
  HarmonicSpec<S> spec;
  if (!doc.contains("unitary")) throw InvalidInput("unitary: missing field");
  spec.unitary = parse_square_matrix<S>(doc["unitary"], "unitary", n);
  spec.seed = seed_doc.family[0].subspace;
  if (!doc.contains("steps") || !doc["steps"].is_number_integer()) throw InvalidInput("steps: expected an integer");
  spec.steps = doc["steps"].get<Index>();
  if (doc.contains("weights")) {
    const Json& w = doc["weights"];
    if (w.is_number()) {
      spec.weights = {w.get<double>()};
    } else {
      const Vector<double> v = parse_vector<double>(w, "weights");
      spec.weights.assign(v.data(), v.data() + v.size());
    }
  }
  return spec;
}

template <FieldScalar S>
int harmonic_report(const HarmonicSpec<S>& spec, const Options& o, std::ostream& out) {
  const Tolerances tol = tolerances(o.common);
  const WeightedFamily<S> fam = orbit_family(spec);
  const BoundsReport b = frame_bounds(fam, tol);
  const WraparoundReport w = check_wraparound(spec, tol);
  Json r = family_header(fam);
  r["command"] = "harmonic";
  r["bounds"] = to_json(b);
  r["eigenvalues"] = to_json(b.eigenvalues);
  r["flags"] = flags_json(fam, b, tol);
  r["wraparound"] = {{"distance", w.distance}, {"holds", w.holds}, {"uniform_parseval", w.uniform_parseval},
                     {"guaranteed", w.guaranteed}};
  const int code = w.holds ? kExitOk : kExitFalse;
  return Reporter(o.common, out).emit(r, code);
}

int cmd_harmonic(const Options& o, std::ostream& out) {
  if (!o.input.empty()) {
    const Json doc = load_json_file(o.input);
    return with_field(doc, [&]<FieldScalar S>() { return harmonic_report(parse_harmonic<S>(doc), o, out); });
  }
  if (o.block_dim < 1 || o.blocks < 1) throw InvalidInput("harmonic: give a spec file or --block-dim and --blocks");
  Rng rng(o.common.seed);
  return harmonic_report(block_shift_spec<cdouble>(o.block_dim, o.blocks, o.repeats, rng), o, out);
}

int cmd_gabor(const Options& o, std::ostream& out) {
  const Tolerances tol = tolerances(o.common);
  GaborSpec spec{o.length, {}, o.q};
  if (!o.window_file.empty()) {
    spec.window = parse_vector_document<cdouble>(load_json_file(o.window_file), o.length);
  } else {
    Rng rng(o.common.seed);
    spec.window = random_vector<cdouble>(o.length, rng);
  }
  const GaborFamily g = gabor_family(spec, tol);
  const BoundsReport b = frame_bounds(g.family, tol);
  const FrameBounds flat = vector_frame_bounds(g.flat, tol);
  const GaborHarmonicReport h = harmonic_gabor_check(spec, tol);
  Json r = family_header(g.family);
  r["command"] = "gabor";
  r["length"] = spec.length;
  r["q"] = spec.q;
  r["window"] = to_json<cdouble>(spec.window);
  r["bounds"] = to_json(b);
  r["eigenvalues"] = to_json(b.eigenvalues);
  r["flat_bounds"] = frame_bounds_json(flat);
  r["harmonic"] = {{"step_distances", h.step_distances},
                   {"max_distance", h.max_distance},
                   {"steps_hold", h.steps_hold},
                   {"equivalences_hold", h.equivalences_hold},
                   {"pass", h.pass}};
  r["flags"] = {{"frame", b.is_frame}, {"tight", b.is_tight}};
  return Reporter(o.common, out).emit(r, b.is_frame && h.pass ? kExitOk : kExitFalse);
}

int cmd_rieszcert(const Options& o, std::ostream& out) {
  const Json doc = load_json_file(o.input);
  const Tolerances tol = tolerances(o.common);
  return with_field(doc, [&]<FieldScalar S>() {
    const LoadedFamily<S> lf = parse_family<S>(doc);
    SubsetMode mode = lf.family.size() <= 16 ? SubsetMode::Exhaustive : SubsetMode::Sampled;
    if (o.mode == "exhaustive") mode = SubsetMode::Exhaustive;
    if (o.mode == "sampled") mode = SubsetMode::Sampled;
    const RieszCertificate c = riesz_family_certificate(lf.family, mode, o.lower_required, o.upper_required,
                                                        o.common.seed, o.samples, tol);
    Json r = family_header(lf.family);
    r["command"] = "rieszcert";
    r["mode"] = mode == SubsetMode::Exhaustive ? "exhaustive" : "sampled";
    r["subsets_checked"] = c.subsets_checked;
    r["min_lower"] = c.min_lower;
    r["max_upper"] = c.max_upper;
    r["worst_subset"] = c.worst_subset;
    r["lower_required"] = c.lower_required;
    if (std::isfinite(c.upper_required)) r["upper_required"] = c.upper_required;
    r["pass"] = c.pass;
    return Reporter(o.common, out).emit(r, c.pass ? kExitOk : kExitFalse, lf.reorthonormalized);
  });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frames of subspaces: bounds, reconstruction, structure and certificates", "fusionctl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Bounds, spectrum and structural flags of a family");
  analyze->add_option("family", o.input, "Family file")->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct a vector from its projections");
  reconstruct->add_option("family", o.input, "Family file")->required();
  reconstruct->add_option("--vector", o.vector_file, "Vector file")->required();

  auto* dualc = app.add_subcommand("dual", "Canonical dual family");
  dualc->add_option("family", o.input, "Family file")->required();

  auto* assemble = app.add_subcommand("assemble", "Assemble local frames into a global frame");
  assemble->add_option("locals", o.input, "Local frames file")->required();

  auto* partition = app.add_subcommand("partition", "Partition a frame into subspaces");
  partition->add_option("file", o.input, "Vectors and partition file")->required();

  auto* enrichc = app.add_subcommand("enrich", "Local frames P_i S^-1 f_j from a global frame");
  enrichc->add_option("family", o.input, "Family file")->required();
  enrichc->add_option("--vectors", o.vectors_file, "Frame vectors file")->required();

  auto* check = app.add_subcommand("check", "Test a single property");
  check->add_option("family", o.input, "Family file")->required();
  check->add_option("--property", o.property, "Property name")
      ->required()
      ->check(CLI::IsMember({"frame", "tight", "parseval", "uniform", "onb", "complete", "minimal",
                             "riesz_decomposition", "exact", "pooled_basis_exact", "bessel"}));

  auto* resolution = app.add_subcommand("resolution", "Resolutions of the identity and their certificates");
  resolution->add_option("family", o.input, "Family file")->required();
  resolution->add_option("--construction", o.construction, "frame-operator or dual-frame")
      ->check(CLI::IsMember({"frame-operator", "dual-frame"}));
  resolution->add_option("--locals", o.locals_file, "Local frames file (dual-frame construction)");
  resolution->add_option("--probes", o.probes, "Random probes per subset (at least 100)");
  resolution->add_option("--l2-bound", o.l2_bound, "Required l2-resolution bound");

  auto* harmonic = app.add_subcommand("harmonic", "Unitary orbit family and wrap-around");
  harmonic->add_option("spec", o.input, "Harmonic spec file");
  harmonic->add_option("--block-dim", o.block_dim, "Generate: block size");
  harmonic->add_option("--blocks", o.blocks, "Generate: number of blocks");
  harmonic->add_option("--repeats", o.repeats, "Generate: laps around the orbit");

  auto* gabor = app.add_subcommand("gabor", "Finite Gabor family split by modulation residue");
  gabor->add_option("--length", o.length, "Signal length L")->required()->check(CLI::Range(1, 64));
  gabor->add_option("--q", o.q, "Number of residue classes (divides L)")->check(CLI::PositiveNumber);
  gabor->add_option("--window", o.window_file, "Window file (default: random from --seed)");

  auto* riesz = app.add_subcommand("rieszcert", "Subfamily bounds over all or sampled subsets");
  riesz->add_option("family", o.input, "Family file")->required();
  riesz->add_option("--mode", o.mode, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  riesz->add_option("--samples", o.samples, "Sampled subsets (at least 200)");
  riesz->add_option("--lower", o.lower_required, "Required lower bound");
  riesz->add_option("--upper", o.upper_required, "Required upper bound");

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) add_common(sub, o.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  const std::map<CLI::App*, int (*)(const Options&, std::ostream&)> handlers = {
      {analyze, cmd_analyze},       {reconstruct, cmd_reconstruct}, {dualc, cmd_dual},
      {assemble, cmd_assemble},     {partition, cmd_partition},     {enrichc, cmd_enrich},
      {check, cmd_check},           {resolution, cmd_resolution},   {harmonic, cmd_harmonic},
      {gabor, cmd_gabor},           {riesz, cmd_rieszcert}};
  try {
    for (const auto& [sub, handler] : handlers) {
      if (sub->parsed()) return handler(o, out);
    }
    err << app.help();
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SingularOperator& e) {
    err << "singular operator: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitFailure;
  }
}

}  // namespace fusion::cli
