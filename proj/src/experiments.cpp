#include "freemix/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "freemix/csv.hpp"
#include "freemix/free_group.hpp"
#include "freemix/free_product.hpp"
#include "freemix/sequences.hpp"

namespace freemix {

namespace {

using nlohmann::json;

constexpr const char* kKnownKinds[] = {"classify", "decay-free-group",
                                       "decay-free-product", "zsido",
                                       "gallery"};

std::string kind_of(const json& entry) {
  if (!entry.contains("kind") || !entry["kind"].is_string())
    throw ConfigError("every experiment entry needs a string 'kind'");
  return entry["kind"].get<std::string>();
}

std::string name_of(const json& entry, std::size_t index) {
  if (entry.contains("name")) {
    if (!entry["name"].is_string())
      throw ConfigError("experiment 'name' must be a string");
    return entry["name"].get<std::string>();
  }
  return kind_of(entry) + "_" + std::to_string(index);
}

std::vector<long> parse_n_grid(const json& entry) {
  if (!entry.contains("n_grid") || !entry["n_grid"].is_array())
    throw ConfigError("entry needs an 'n_grid' array");
  std::vector<long> grid;
  for (const auto& v : entry["n_grid"]) {
    if (!v.is_number_integer() || v.get<long>() < 1)
      throw ConfigError("n_grid entries must be positive integers");
    grid.push_back(v.get<long>());
  }
  if (grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw ConfigError("n_grid must be strictly increasing");
  return grid;
}

Complex parse_scalar(const json& j) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex{j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("matrix entries must be numbers or [re, im] pairs");
}

Vector parse_vector(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("vector literal must be a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_scalar(j[i]);
  return v;
}

AlgebraElement parse_element(const BlockShape& shape, const json& j) {
  if (j.is_object() && j.contains("unit")) {
    const auto& u = j["unit"];
    if (!u.is_array() || u.size() != 3)
      throw ConfigError("'unit' must be [block, i, j]");
    return AlgebraElement::matrix_unit(shape, u[0].get<std::size_t>(),
                                       u[1].get<Eigen::Index>(),
                                       u[2].get<Eigen::Index>());
  }
  if (j.is_object() && j.contains("blocks")) {
    const auto& bl = j["blocks"];
    if (!bl.is_array() || bl.size() != shape.dims.size())
      throw ConfigError("'blocks' must list one matrix per algebra block");
    std::vector<Matrix> blocks;
    for (const auto& m : bl) blocks.push_back(parse_matrix(m));
    AlgebraElement x{std::move(blocks)};
    if (x.shape() != shape)
      throw ConfigError("element blocks do not match the algebra shape");
    return x;
  }
  throw ConfigError("element literal must carry 'unit' or 'blocks'");
}

BlockShape parse_shape(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("'algebra' must be a nonempty array of block sizes");
  BlockShape shape;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<long>() < 1)
      throw ConfigError("block sizes must be positive integers");
    shape.dims.push_back(d.get<Eigen::Index>());
  }
  return shape;
}

// Structural checks per entry kind, run at parse time.
void check_entry(const json& entry) {
  const std::string kind = kind_of(entry);
  bool known = false;
  for (const char* k : kKnownKinds) known = known || kind == k;
  if (!known) throw ConfigError("unknown experiment kind '" + kind + "'");

  if (kind == "classify") {
    if (!entry.contains("operator"))
      throw ConfigError("classify entry needs an 'operator'");
  } else if (kind == "decay-free-group") {
    if (!entry.contains("word") || !entry["word"].is_string())
      throw ConfigError("decay-free-group entry needs a string 'word'");
    parse_n_grid(entry);
  } else if (kind == "decay-free-product") {
    if (!entry.contains("word") || !entry["word"].is_array())
      throw ConfigError("decay-free-product entry needs a 'word' letter array");
    if (!entry.contains("d"))
      throw ConfigError("decay-free-product entry needs the factor size 'd'");
    parse_n_grid(entry);
  } else if (kind == "zsido") {
    if (!entry.contains("sequences") || !entry["sequences"].is_array() ||
        entry["sequences"].empty())
      throw ConfigError("zsido entry needs a nonempty 'sequences' array");
    const auto grid = parse_n_grid(entry);
    for (long n : grid)
      if (n > kWmzExactMaxN && !entry.contains("seed"))
        throw ConfigError(
            "zsido entry uses sampled mode (n > exact cutoff) and needs a 'seed'");
  }
}

struct EntryOutcome {
  bool validation_failed = false;
  bool diagnostic_failed = false;
};

std::string format_complex(Complex z) {
  std::string s = CsvWriter::fmt(z.real());
  s += (z.imag() < 0 ? "-" : "+");
  s += CsvWriter::fmt(std::abs(z.imag()));
  s += "i";
  return s;
}

std::string peripheral_string(const std::vector<Complex>& eigs) {
  std::string s;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (i) s += ';';
    s += format_complex(eigs[i]);
  }
  return s;
}

void run_classify(const json& entry, const std::string& name,
                  const std::filesystem::path& out_dir) {
  const MarkovOperator t = parse_operator(entry["operator"]);
  const long n_probe = entry.value("n_probe", 2000L);
  const MixingReport report = classify(t, kPeripheralBand, n_probe);

  CsvWriter csv(out_dir / (name + ".csv"),
                {"name", "ue", "swm", "peripheral_eigs", "max_defect_at_n"});
  csv.row({name, CsvWriter::fmt(report.uniquely_ergodic),
           CsvWriter::fmt(report.strictly_weak_mixing),
           peripheral_string(report.peripheral_eigenvalues),
           CsvWriter::fmt(report.max_defect)});
}

HaagerupConstants parse_constants(const json& entry) {
  if (!entry.contains("constants")) return FreeGroupSharp{};
  const auto& c = entry["constants"];
  const std::string mode = c.value("mode", "free-group-sharp");
  if (mode == "free-group-sharp") return FreeGroupSharp{};
  if (mode == "rd") {
    if (!c.contains("C") || !c.contains("s"))
      throw ConfigError("rd constants need 'C' and 's'");
    return RDConstants{c["C"].get<double>(), c["s"].get<double>()};
  }
  throw ConfigError("unknown constants mode '" + mode + "'");
}

void write_decay_rows(CsvWriter& csv, const std::vector<DecayRecord>& records,
                      bool with_p) {
  for (const auto& rec : records) {
    if (rec.lower_float > rec.upper_float + 1e-12) {
      std::ostringstream msg;
      msg << "decay record for '" << rec.label << "' at n=" << rec.n
          << " has lower " << rec.lower_float << " above upper "
          << rec.upper_float;
      throw DiagnosticError(msg.str());
    }
    std::vector<std::string> cells{
        rec.label,
        CsvWriter::fmt(rec.n),
        boost::multiprecision::numerator(rec.lower_square).str(),
        boost::multiprecision::denominator(rec.lower_square).str(),
        CsvWriter::fmt(rec.lower_float),
        CsvWriter::fmt(rec.upper_float),
        rec.constants_mode};
    if (with_p) cells.push_back(std::to_string(rec.word_length));
    csv.row(cells);
  }
}

void run_decay_free_group(const json& entry, const std::string& name,
                          const std::filesystem::path& out_dir) {
  const GroupWord g = GroupWord::parse(entry["word"].get<std::string>());
  if (g.is_identity())
    throw ConfigError("decay-free-group: the word must be nonempty");
  const std::vector<long> grid = parse_n_grid(entry);
  const HaagerupConstants constants = parse_constants(entry);
  const auto records = decay_experiment(g, grid, constants);
  CsvWriter csv(out_dir / (name + ".csv"),
                {"word", "n", "lower_exact_num", "lower_exact_den",
                 "lower_float", "upper_float", "constants_mode"});
  write_decay_rows(csv, records, /*with_p=*/false);
}

AmalgamState parse_amalgam_state(const json& entry) {
  const Eigen::Index d = entry["d"].get<Eigen::Index>();
  if (d < 1) throw ConfigError("factor size 'd' must be >= 1");
  if (!entry.contains("state") ||
      (entry["state"].is_string() && entry["state"] == "trace"))
    return AmalgamState::trace_state(d);
  Matrix rho = parse_matrix(entry["state"]);
  if (rho.rows() != d)
    throw ConfigError("state density does not match the factor size");
  try {
    return AmalgamState(std::move(rho));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("bad amalgam state: ") + e.what());
  }
}

ProductWord parse_product_word(const json& entry, const AmalgamState& st) {
  std::vector<CenteredLetter> letters;
  for (const auto& l : entry["word"]) {
    if (!l.is_object() || !l.contains("index") || !l.contains("matrix"))
      throw ConfigError("each word letter needs 'index' and 'matrix'");
    CenteredLetter letter;
    letter.index = l["index"].get<long>();
    letter.element = parse_matrix(l["matrix"]);
    if (l.value("center", true)) letter.element = center(letter.element, st);
    letters.push_back(std::move(letter));
  }
  try {
    return ProductWord(std::move(letters), st);
  } catch (const Error& e) {
    throw ConfigError(std::string("bad product word: ") + e.what());
  }
}

void run_decay_free_product(const json& entry, const std::string& name,
                            const std::filesystem::path& out_dir) {
  const AmalgamState st = parse_amalgam_state(entry);
  const ProductWord w = parse_product_word(entry, st);
  const std::vector<long> grid = parse_n_grid(entry);
  const auto records = product_decay_experiment(w, grid, st, name);
  CsvWriter csv(out_dir / (name + ".csv"),
                {"word", "n", "lower_exact_num", "lower_exact_den",
                 "lower_float", "upper_float", "constants_mode", "p"});
  write_decay_rows(csv, records, /*with_p=*/true);
}

VectorSequence parse_sequence(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("each zsido sequence needs a 'type'");
  const std::string type = j["type"].get<std::string>();
  Vector v;
  if (j.contains("v")) {
    v = parse_vector(j["v"]);
  } else if (j.contains("dim")) {
    v = Vector::Zero(j["dim"].get<Eigen::Index>());
    if (v.size() < 1) throw ConfigError("sequence 'dim' must be >= 1");
    v(0) = 1.0;
  } else if (type != "markov-orbit") {
    throw ConfigError("sequence needs 'v' or 'dim'");
  }
  if (type == "eigen") {
    const double theta = j.value("theta", 1.0);
    return VectorSequence::eigen_sequence(std::polar(1.0, theta), v);
  }
  if (type == "alternating") return VectorSequence::alternating(v);
  if (type == "inverse-sqrt") return VectorSequence::inverse_sqrt(v);
  if (type == "zero") return VectorSequence::zero(v.size() > 0 ? v.size() : 1);
  if (type == "markov-orbit") {
    if (!j.contains("operator") || !j.contains("x"))
      throw ConfigError("markov-orbit sequence needs 'operator' and 'x'");
    MarkovOperator t = parse_operator(j["operator"]);
    t.require_valid();
    return VectorSequence::markov_orbit(t,
                                        parse_element(t.shape(), j["x"]));
  }
  throw ConfigError("unknown sequence type '" + type + "'");
}

IndexSequence parse_subsequence(const std::string& name, long horizon) {
  if (name == "all") return IndexSequence::all(horizon);
  if (name == "even") return IndexSequence::evens(horizon);
  if (name == "odd") return IndexSequence::odds(horizon);
  if (name == "squares") return IndexSequence::squares(horizon);
  throw ConfigError("unknown subsequence '" + name + "'");
}

void run_zsido(const json& entry, const std::string& name,
               const std::filesystem::path& out_dir) {
  const std::vector<long> grid = parse_n_grid(entry);
  const long horizon = entry.value("horizon", 10000L);
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  const long trials = entry.value("trials", 400L);
  const unsigned seed = entry.value("seed", 1u);

  std::vector<std::string> sub_names{"all", "even"};
  if (entry.contains("subsequences")) {
    sub_names.clear();
    for (const auto& s : entry["subsequences"])
      sub_names.push_back(s.get<std::string>());
  }
  std::vector<IndexSequence> subs;
  for (const auto& s : sub_names) subs.push_back(parse_subsequence(s, horizon));

  CsvWriter csv(out_dir / (name + ".csv"),
                {"sequence_name", "n", "wmz_value", "certificate",
                 "subsequence_name", "sub_norm"});
  for (const auto& sj : entry["sequences"]) {
    const VectorSequence seq = parse_sequence(sj);
    for (long n : grid) {
      WmzResult wmz = n <= kWmzExactMaxN
                          ? wmz_quantity(seq, n)
                          : wmz_quantity(seq, n, WmzSampling{trials, seed});
      const char* cert =
          wmz.certificate == WmzCertificate::kExact ? "exact" : "lower_bound";
      for (const auto& idx : subs) {
        std::string sub_norm;
        if (idx.size() >= n)
          sub_norm = CsvWriter::fmt(subsequence_cesaro_norm(seq, idx, n));
        csv.row({seq.name(), CsvWriter::fmt(n), CsvWriter::fmt(wmz.value),
                 cert, idx.name(), sub_norm});
      }
    }
  }
  std::cout << "note: densities over finite horizons are lower envelopes on "
               "the last eighth of the horizon, not true liminf values\n";
}

struct GalleryRow {
  std::string name;
  std::string kind;
  std::string expected;
  std::string actual;
  bool pass = false;
};

GalleryRow gallery_classify(const std::string& name, const MarkovOperator& t,
                            bool expect_swm) {
  GalleryRow row{name, "classify", "", "", false};
  std::ostringstream exp;
  exp << "ue=1 swm=" << (expect_swm ? 1 : 0);
  row.expected = exp.str();
  const MixingReport rep = classify(t);
  std::ostringstream act;
  act << "ue=" << (rep.uniquely_ergodic ? 1 : 0)
      << " swm=" << (rep.strictly_weak_mixing ? 1 : 0);
  row.actual = act.str();
  row.pass = rep.uniquely_ergodic && rep.strictly_weak_mixing == expect_swm;
  return row;
}

void run_gallery(const std::string& name,
                 const std::filesystem::path& out_dir) {
  std::vector<GalleryRow> rows;

  rows.push_back(gallery_classify(
      "depolarizing", MarkovOperator::depolarizing(2, 0.3), true));

  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = std::polar(1.0, 1.0);
  rows.push_back(gallery_classify(
      "unitary_conjugation",
      MarkovOperator::unitary_conjugation(BlockShape{{2}}, u), false));

  rows.push_back(gallery_classify(
      "identity", MarkovOperator::identity_map(BlockShape{{2}}), true));

  {
    GalleryRow row{"transpose", "validate", "rejected min_choi=-1", "", false};
    const ValidationReport rep = MarkovOperator::transpose_map(2).validate();
    std::ostringstream act;
    act << (rep.passes() ? "accepted" : "rejected")
        << " min_choi=" << CsvWriter::fmt(rep.min_choi_eigenvalue);
    row.actual = act.str();
    row.pass = !rep.passes() && std::abs(rep.min_choi_eigenvalue + 1.0) <= 1e-10;
    rows.push_back(row);
  }

  {
    GalleryRow row{"g0_shift_decay", "decay-free-group",
                   "lower=1/sqrt(n) upper=2/sqrt(n)", "", false};
    const std::vector<long> ns{1, 4, 16};
    const auto recs = decay_experiment(GroupWord::generator(0), ns,
                                       FreeGroupSharp{});
    bool ok = true;
    for (const auto& rec : recs) {
      const double root = 1.0 / std::sqrt(static_cast<double>(rec.n));
      ok = ok && rec.lower_square == Rational(1, rec.n) &&
           std::abs(rec.lower_float - root) <= 1e-12 &&
           std::abs(rec.upper_float - 2.0 * root) <= 1e-12;
    }
    row.actual = ok ? "matched on n in {1,4,16}" : "mismatch";
    row.pass = ok;
    rows.push_back(row);
  }

  {
    GalleryRow row{"sigma_x_shift_decay", "decay-free-product",
                   "lower=1/sqrt(n) upper=3/sqrt(n)", "", false};
    const AmalgamState st = AmalgamState::trace_state(2);
    Matrix sx = Matrix::Zero(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    const ProductWord w({CenteredLetter{0, sx}}, st);
    const std::vector<long> ns{1, 4, 16};
    const auto recs = product_decay_experiment(w, ns, st, "sigma_x@0");
    bool ok = true;
    for (const auto& rec : recs) {
      const double root = 1.0 / std::sqrt(static_cast<double>(rec.n));
      ok = ok && std::abs(rec.lower_float - root) <= 1e-12 &&
           std::abs(rec.upper_float - 3.0 * root) <= 1e-12;
    }
    row.actual = ok ? "matched on n in {1,4,16}" : "mismatch";
    row.pass = ok;
    rows.push_back(row);
  }

  CsvWriter csv(out_dir / (name + ".csv"),
                {"name", "kind", "expected", "actual", "pass"});
  bool all_pass = true;
  for (const auto& row : rows) {
    csv.row({row.name, row.kind, row.expected, row.actual,
             CsvWriter::fmt(row.pass)});
    all_pass = all_pass && row.pass;
  }
  if (!all_pass)
    throw DiagnosticError("gallery: at least one canonical expectation failed");
}

void run_entry(const json& entry, const std::string& name,
               const std::filesystem::path& out_dir) {
  const std::string kind = kind_of(entry);
  if (kind == "classify")
    run_classify(entry, name, out_dir);
  else if (kind == "decay-free-group")
    run_decay_free_group(entry, name, out_dir);
  else if (kind == "decay-free-product")
    run_decay_free_product(entry, name, out_dir);
  else if (kind == "zsido")
    run_zsido(entry, name, out_dir);
  else if (kind == "gallery")
    run_gallery(name, out_dir);
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(root);
}

ExperimentConfig parse_config(const json& root) try {
  if (!root.is_object() || !root.contains("experiments") ||
      !root["experiments"].is_array() || root["experiments"].empty())
    throw ConfigError("config needs a nonempty 'experiments' array");

  ExperimentConfig config;
  if (root.contains("out")) {
    if (!root["out"].is_string())
      throw ConfigError("config 'out' must be a string");
    config.out = root["out"].get<std::string>();
  }

  std::set<std::string> names;
  std::size_t index = 0;
  for (const auto& entry : root["experiments"]) {
    check_entry(entry);
    const std::string name = name_of(entry, index);
    if (name.find_first_of("/\\") != std::string::npos)
      throw ConfigError("experiment name '" + name + "' must not contain path separators");
    if (!names.insert(name).second)
      throw ConfigError("duplicate experiment name '" + name + "'");
    config.entries.push_back(entry);
    ++index;
  }
  return config;
} catch (const json::exception& e) {
  throw ConfigError(std::string("malformed config value: ") + e.what());
}

std::filesystem::path resolve_out_dir(
    const ExperimentConfig& config, const std::optional<std::string>& cli_out) {
  if (cli_out) return *cli_out;
  if (config.out) return *config.out;
  if (const char* env = std::getenv(kOutDirEnvVar); env != nullptr && *env)
    return env;
  return ".";
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("matrix literal must be a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty())
      throw ConfigError("matrix rows must be nonempty arrays");
    if (cols == 0)
      cols = row.size();
    else if (row.size() != cols)
      throw ConfigError("matrix rows have inconsistent lengths");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_scalar(j[r][c]);
  return m;
}

MarkovOperator parse_operator(const json& j) {
  if (!j.is_object()) throw ConfigError("operator literal must be an object");
  try {
    if (j.contains("builtin")) {
      const std::string b = j["builtin"].get<std::string>();
      if (b == "depolarizing")
        return MarkovOperator::depolarizing(j.value("d", 2L),
                                            j.value("lambda", 0.5));
      if (b == "identity")
        return MarkovOperator::identity_map(
            parse_shape(j.value("algebra", json::array({2}))));
      if (b == "transpose")
        return MarkovOperator::transpose_map(j.value("d", 2L));
      if (b == "unitary-diag") {
        if (!j.contains("phases") || !j["phases"].is_array() ||
            j["phases"].empty())
          throw ConfigError("unitary-diag needs a nonempty 'phases' array");
        const auto& ph = j["phases"];
        const Eigen::Index d = static_cast<Eigen::Index>(ph.size());
        Matrix u = Matrix::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
          u(i, i) = std::polar(1.0, ph[i].get<double>());
        return MarkovOperator::unitary_conjugation(BlockShape{{d}}, u);
      }
      if (b == "random-unital-cp") {
        if (!j.contains("seed"))
          throw ConfigError("random-unital-cp needs a 'seed'");
        Rng rng(j["seed"].get<std::uint64_t>());
        const Eigen::Index d = j.value("d", 2L);
        return MarkovOperator::random_unital_cp(
            d, j.value("kraus_count", static_cast<int>(d * d)), rng);
      }
      throw ConfigError("unknown builtin operator '" + b + "'");
    }
    if (!j.contains("algebra"))
      throw ConfigError("explicit operators need an 'algebra' block list");
    BlockShape shape = parse_shape(j["algebra"]);
    if (j.contains("kraus")) {
      std::vector<Matrix> kraus;
      for (const auto& k : j["kraus"]) kraus.push_back(parse_matrix(k));
      return MarkovOperator::from_kraus(std::move(shape), std::move(kraus));
    }
    if (j.contains("super"))
      return MarkovOperator::from_super(std::move(shape),
                                        parse_matrix(j["super"]));
    throw ConfigError("operator literal needs 'builtin', 'kraus' or 'super'");
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("bad operator literal: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("bad operator literal: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad operator literal: ") + e.what());
  }
}

int run_experiments(const ExperimentConfig& config,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec && !std::filesystem::is_directory(out_dir))
    throw ConfigError("cannot create output directory " + out_dir.string());

  bool validation_failed = false;
  bool diagnostic_failed = false;
  std::size_t index = 0;
  for (const auto& entry : config.entries) {
    const std::string name = name_of(entry, index);
    ++index;
    try {
      run_entry(entry, name, out_dir);
      std::cout << "wrote " << (out_dir / (name + ".csv")).string() << "\n";
    } catch (const DiagnosticError& e) {
      std::cerr << "error: " << name << ": " << e.what() << "\n";
      diagnostic_failed = true;
    } catch (const ValidationError& e) {
      std::cerr << "error: " << name << ": " << e.what() << "\n";
      validation_failed = true;
    } catch (const json::exception& e) {
      throw ConfigError("entry '" + name + "': " + e.what());
    }
  }
  if (diagnostic_failed) return 4;
  if (validation_failed) return 3;
  return 0;
}

int validate_experiments(const ExperimentConfig& config) {
  bool validation_failed = false;
  std::size_t index = 0;
  for (const auto& entry : config.entries) {
    const std::string name = name_of(entry, index);
    ++index;
    const std::string kind = kind_of(entry);
    try {
      if (kind == "classify") {
        parse_operator(entry["operator"]).require_valid();
      } else if (kind == "decay-free-group") {
        GroupWord::parse(entry["word"].get<std::string>());
        parse_constants(entry);
      } else if (kind == "decay-free-product") {
        const AmalgamState st = parse_amalgam_state(entry);
        parse_product_word(entry, st);
      } else if (kind == "zsido") {
        for (const auto& sj : entry["sequences"]) parse_sequence(sj);
      }
    } catch (const ValidationError& e) {
      std::cerr << "error: " << name << ": " << e.what() << "\n";
      validation_failed = true;
    } catch (const json::exception& e) {
      throw ConfigError("entry '" + name + "': " + e.what());
    }
  }
  return validation_failed ? 3 : 0;
}

}  // namespace freemix
