// geoops command-line driver: wires the library into reproducible batch
// studies. Every command is a pure function of (inputs, config, seed); all
// outputs land in --out together with the resolved config and a manifest of
// content hashes.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "geoops/csv.hpp"
#include "geoops/geoops.hpp"
#include "geoops/sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace geoops;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct OutputDir {
  fs::path root;
  std::vector<fs::path> produced;

  explicit OutputDir(const std::string& path) : root(path) { fs::create_directories(root); }

  fs::path file(const std::string& name) {
    produced.push_back(root / name);
    return root / name;
  }

  void write_text(const std::string& name, const std::string& content) {
    std::ofstream out(file(name), std::ios::binary);
    out << content;
  }

  void write_manifest(const std::string& command) {
    json manifest;
    manifest["command"] = command;
    json files = json::array();
    std::vector<fs::path> sorted = produced;
    std::sort(sorted.begin(), sorted.end());
    for (const fs::path& p : sorted) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      files.push_back({{"path", p.filename().string()}, {"sha256", Sha256::of_string(buffer.str())}});
    }
    manifest["files"] = files;
    std::ofstream out(root / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
  }
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw GeoError(ErrorCode::IO_ERROR, "cannot open config " + path);
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    throw GeoError(ErrorCode::PARSE_ERROR, std::string("config JSON: ") + e.what());
  }
  return config;
}

template <typename T>
T get_or(const json& config, const std::string& key, T fallback) {
  if (config.contains(key)) return config.at(key).get<T>();
  return fallback;
}

void echo_config(OutputDir& out, const json& resolved) {
  out.write_text("config.json", resolved.dump(2) + "\n");
}

std::string design_id(const std::string& prefix, std::size_t index, std::size_t total) {
  std::size_t width = 1;
  for (std::size_t v = total > 0 ? total - 1 : 0; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index);
  while (digits.size() < width) digits.insert(digits.begin(), '0');
  return prefix + digits;
}

MomentVariant parse_variant(const std::string& name) {
  if (name == "raw") return MomentVariant::RAW;
  if (name == "central") return MomentVariant::CENTRAL;
  if (name == "central_scale_normalised") return MomentVariant::CENTRAL_SCALE_NORMALISED;
  throw GeoError(ErrorCode::INVALID_ARGUMENT, "unknown moment variant '" + name + "'");
}

GoConfig go_config_from_json(const json& config) {
  GoConfig go;
  go.moment_order_2d = get_or(config, "moment_order_2d", go.moment_order_2d);
  go.moment_order_3d = get_or(config, "moment_order_3d", go.moment_order_3d);
  go.moment_variant = parse_variant(get_or<std::string>(config, "moment_variant", "raw"));
  go.fd_samples = get_or<std::size_t>(config, "fd_samples", go.fd_samples);
  go.fd_sections = get_or<std::size_t>(config, "fd_sections", go.fd_sections);
  go.fd_per_section = get_or<std::size_t>(config, "fd_per_section", go.fd_per_section);
  go.ft_include_centroid = get_or(config, "ft_include_centroid", go.ft_include_centroid);
  return go;
}

json go_config_to_json(const GoConfig& go) {
  json out;
  out["moment_order_2d"] = go.moment_order_2d;
  out["moment_order_3d"] = go.moment_order_3d;
  out["moment_variant"] = go.moment_variant == MomentVariant::RAW ? "raw"
                          : go.moment_variant == MomentVariant::CENTRAL
                              ? "central"
                              : "central_scale_normalised";
  out["fd_samples"] = go.fd_samples;
  out["fd_sections"] = go.fd_sections;
  out["fd_per_section"] = go.fd_per_section;
  out["ft_include_centroid"] = go.ft_include_centroid;
  return out;
}

std::string features_header(const GoVector& first) {
  std::string header = "design_id";
  for (std::size_t i = 0; i < first.params.size(); ++i) header += ",p" + std::to_string(i);
  for (const MomentEntry& e : first.moments.entries)
    header += "," + moment_column_name(e, first.moments.dim);
  header += ",k,ft";
  return header;
}

std::string features_row(const GoVector& go) {
  std::string row = go.design_id;
  for (double v : go.params) row += "," + format_double(v);
  for (const MomentEntry& e : go.moments.entries) row += "," + format_double(e.value);
  row += "," + format_double(go.total_curvature);
  row += "," + format_double(go.total_energy);
  return row;
}

/// Column roles recovered from a features.csv header.
enum class ColumnKind { ID, P, M, K, FT, OTHER };

ColumnKind column_kind(const std::string& name) {
  if (name == "design_id") return ColumnKind::ID;
  if (name == "k") return ColumnKind::K;
  if (name == "ft") return ColumnKind::FT;
  if (name.rfind("m[", 0) == 0) return ColumnKind::M;
  if (name.size() > 1 && name[0] == 'p') {
    bool digits = true;
    for (std::size_t i = 1; i < name.size(); ++i) digits = digits && std::isdigit(name[i]);
    if (digits) return ColumnKind::P;
  }
  return ColumnKind::OTHER;
}

std::array<int, 3> parse_moment_column(const std::string& name, int& dim) {
  // "m[p.q]" or "m[p.q.r]"
  const std::string inner = name.substr(2, name.size() - 3);
  std::array<int, 3> exps{0, 0, 0};
  int count = 0;
  std::string token;
  auto flush = [&] {
    if (count < 3 && !token.empty()) exps[count++] = std::stoi(token);
    token.clear();
  };
  for (char c : inner) {
    if (c == '.')
      flush();
    else
      token += c;
  }
  flush();
  dim = count;
  return exps;
}

/// Reconstructs GO vectors from a features.csv table.
std::vector<GoVector> gos_from_table(const CsvTable& table) {
  std::vector<int> p_cols, m_cols;
  int id_col = -1, k_col = -1, ft_col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    switch (column_kind(table.header[c])) {
      case ColumnKind::ID: id_col = static_cast<int>(c); break;
      case ColumnKind::P: p_cols.push_back(static_cast<int>(c)); break;
      case ColumnKind::M: m_cols.push_back(static_cast<int>(c)); break;
      case ColumnKind::K: k_col = static_cast<int>(c); break;
      case ColumnKind::FT: ft_col = static_cast<int>(c); break;
      case ColumnKind::OTHER: break;
    }
  }
  if (id_col < 0) throw GeoError(ErrorCode::PARSE_ERROR, "features CSV lacks design_id");

  int dim = 2;
  std::vector<std::array<int, 3>> m_exps;
  int order_max = 0;
  for (int c : m_cols) {
    int tuple_len = 0;
    const auto exps = parse_moment_column(table.header[static_cast<std::size_t>(c)], tuple_len);
    dim = tuple_len == 3 ? 3 : 2;
    order_max = std::max(order_max, exps[0] + exps[1] + exps[2]);
    m_exps.push_back(exps);
  }

  std::vector<GoVector> gos;
  gos.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    GoVector go;
    go.design_id = row[static_cast<std::size_t>(id_col)];
    for (int c : p_cols) go.params.push_back(csv_to_double(row[static_cast<std::size_t>(c)]));
    go.has_params = !p_cols.empty();
    if (!m_cols.empty()) {
      go.moments.dim = dim;
      go.moments.order_max = order_max;
      for (std::size_t i = 0; i < m_cols.size(); ++i)
        go.moments.entries.push_back(
            {m_exps[i], csv_to_double(row[static_cast<std::size_t>(m_cols[i])])});
      go.has_moments = true;
    }
    if (k_col >= 0) {
      go.total_curvature = csv_to_double(row[static_cast<std::size_t>(k_col)]);
      go.has_curvature = true;
    }
    if (ft_col >= 0) {
      go.total_energy = csv_to_double(row[static_cast<std::size_t>(ft_col)]);
      go.has_energy = true;
    }
    gos.push_back(std::move(go));
  }
  return gos;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeoError(ErrorCode::IO_ERROR, "cannot open " + path);
  return read_csv(in);
}

// ---------------------------------------------------------------------------
// gen-airfoils

int run_gen_airfoils(const json& config, const std::string& out_dir, std::uint64_t seed) {
  const std::size_t count = get_or<std::size_t>(config, "n", 10);
  const std::size_t n_points = get_or<std::size_t>(config, "n_points", 192);
  if (count < 1) {
    std::cerr << "gen-airfoils: n must be >= 1\n";
    return kExitConfig;
  }

  OutputDir out(out_dir);
  json resolved;
  resolved["command"] = "gen-airfoils";
  resolved["n"] = count;
  resolved["n_points"] = n_points;
  resolved["seed"] = seed;
  echo_config(out, resolved);

  const auto samples = lhs_sample(11, count, seed);
  std::string params_csv = "design_id";
  for (int i = 0; i < 11; ++i) params_csv += ",p" + std::to_string(i);
  params_csv += "\n";

  for (std::size_t i = 0; i < count; ++i) {
    const std::string id = design_id("af", i, count);
    AirfoilParams params;
    std::copy(samples[i].begin(), samples[i].end(), params.p.begin());
    const ClosedProfile2D profile = generate_airfoil(params, n_points);
    std::ofstream dat(out.file(id + ".dat"));
    write_uiuc_dat(dat, id, profile);
    params_csv += id;
    for (double v : samples[i]) params_csv += "," + format_double(v);
    params_csv += "\n";
  }
  out.write_text("params.csv", params_csv);
  out.write_manifest("gen-airfoils");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// features

struct FeatureInput {
  std::string id;
  std::string path;  // empty for generated designs
  std::optional<AirfoilParams> params;
};

int run_features(const json& config, const std::string& out_dir, std::uint64_t seed,
                 std::size_t jobs) {
  const GoConfig go_config = go_config_from_json(config);
  const bool emit_details = get_or(config, "emit_details", false);

  std::vector<FeatureInput> inputs;
  std::string p_kind = "profile_coords";
  std::size_t n_points = get_or<std::size_t>(config, "n_points", 192);
  std::vector<std::vector<double>> generated_params;

  if (config.contains("generate")) {
    const json& gen = config.at("generate");
    const std::size_t count = gen.at("n").get<std::size_t>();
    n_points = get_or<std::size_t>(gen, "n_points", n_points);
    generated_params = lhs_sample(11, count, seed);
    for (std::size_t i = 0; i < count; ++i) {
      FeatureInput input;
      input.id = design_id("af", i, count);
      AirfoilParams params;
      std::copy(generated_params[i].begin(), generated_params[i].end(), params.p.begin());
      input.params = params;
      inputs.push_back(input);
    }
    p_kind = "airfoil_params";
  } else if (config.contains("inputs")) {
    const auto paths = config.at("inputs").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      FeatureInput input;
      input.path = paths[i];
      input.id = fs::path(paths[i]).stem().string();
      const std::string ext = fs::path(paths[i]).extension().string();
      if (ext == ".obj" || ext == ".stl") p_kind = "mesh_coords";
      inputs.push_back(input);
    }
  } else {
    std::cerr << "features: config needs either \"generate\" or \"inputs\"\n";
    return kExitConfig;
  }

  OutputDir out(out_dir);
  json resolved = go_config_to_json(go_config);
  resolved["command"] = "features";
  resolved["seed"] = seed;
  resolved["p_kind"] = p_kind;
  resolved["n_points"] = n_points;
  if (config.contains("generate")) resolved["generate"] = config.at("generate");
  if (config.contains("inputs")) resolved["inputs"] = config.at("inputs");
  echo_config(out, resolved);

  std::vector<std::optional<GoVector>> results(inputs.size());
  std::vector<std::optional<TriangleMesh>> meshes(inputs.size());  // kept for emit_details
  std::vector<std::string> errors(inputs.size());

  parallel_for(inputs.size(), jobs, [&](std::size_t i) {
    const FeatureInput& input = inputs[i];
    try {
      if (input.params) {
        const ClosedProfile2D profile = generate_airfoil(*input.params, n_points);
        std::vector<double> p(input.params->p.begin(), input.params->p.end());
        results[i] = assemble_go(profile, p, go_config, input.id);
      } else {
        const std::string ext = fs::path(input.path).extension().string();
        if (ext == ".dat") {
          std::ifstream in(input.path);
          if (!in) throw GeoError(ErrorCode::IO_ERROR, "cannot open " + input.path);
          const auto [name, profile] = load_uiuc_dat(in);
          (void)name;
          results[i] = assemble_go(profile, std::nullopt, go_config, input.id);
        } else if (ext == ".obj") {
          TriangleMesh mesh = load_mesh(input.path, MeshFormat::OBJ);
          results[i] = assemble_go(mesh, std::nullopt, go_config, input.id);
          meshes[i] = std::move(mesh);
        } else if (ext == ".stl") {
          // Sniff ASCII vs binary: ASCII files start with "solid" and parse.
          TriangleMesh mesh;
          try {
            mesh = load_mesh(input.path, MeshFormat::STL_ASCII);
          } catch (const GeoError&) {
            mesh = load_mesh(input.path, MeshFormat::STL_BINARY);
          }
          results[i] = assemble_go(mesh, std::nullopt, go_config, input.id);
          meshes[i] = std::move(mesh);
        } else {
          throw GeoError(ErrorCode::INVALID_ARGUMENT, "unknown input extension " + ext);
        }
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  // Rows must agree on layout; the first success fixes it.
  std::string csv;
  std::string errors_csv = "design_id,error\n";
  std::size_t n_ok = 0;
  const GoVector* first = nullptr;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!results[i]) {
      errors_csv += inputs[i].id + "," + errors[i] + "\n";
      continue;
    }
    const GoVector& go = *results[i];
    if (!first) {
      first = &go;
      csv = features_header(go) + "\n";
    } else if (go.params.size() != first->params.size() ||
               go.moments.entries.size() != first->moments.entries.size()) {
      errors_csv += inputs[i].id + ",row layout differs from first design\n";
      continue;
    }
    csv += features_row(go) + "\n";
    ++n_ok;
  }

  out.write_text("features.csv", csv);
  out.write_text("errors.csv", errors_csv);

  if (emit_details) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (!results[i]) continue;
      const GoVector& go = *results[i];
      {
        std::ofstream moments_csv(out.file("moments_" + go.design_id + ".csv"));
        write_moments_csv(moments_csv, go.moments);
      }
      out.write_text("moments_" + go.design_id + ".json", moments_to_json(go.moments) + "\n");
      if (meshes[i]) {
        const CurvatureSummary summary = total_curvature_mesh(*meshes[i]);
        out.write_text("curvature_" + go.design_id + ".json",
                       curvature_summary_to_json(summary) + "\n");
        std::ofstream deficits(out.file("curvature_" + go.design_id + ".csv"));
        write_vertex_deficits_csv(deficits, summary);
        const FourierGrid grid =
            sectional_fd_3d(*meshes[i], go_config.fd_sections, go_config.fd_per_section);
        std::ofstream grid_csv(out.file("fd_" + go.design_id + ".csv"));
        write_fourier_grid_csv(grid_csv, grid);
        std::ofstream grid_mag(out.file("fd_" + go.design_id + "_magnitudes.csv"));
        write_fourier_grid_magnitudes_csv(grid_mag, grid);
      }
    }
  }

  json sidecar;
  sidecar["p_kind"] = p_kind;
  sidecar["n_points"] = n_points;
  sidecar["seed"] = seed;
  sidecar["go_config"] = go_config_to_json(go_config);
  sidecar["n_designs"] = n_ok;
  out.write_text("features.sidecar.json", sidecar.dump(2) + "\n");
  out.write_manifest("features");

  if (n_ok == 0) {
    std::cerr << "features: no design succeeded\n";
    return kExitRuntime;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// reduce

Eigen::MatrixXd select_columns(const CsvTable& table, const ComboSpec& combo,
                               std::vector<int>& selected) {
  selected.clear();
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const ColumnKind kind = column_kind(table.header[c]);
    const bool take = (kind == ColumnKind::P && combo.include_p) ||
                      (kind == ColumnKind::M && combo.include_m) ||
                      (kind == ColumnKind::K && combo.include_k) ||
                      (kind == ColumnKind::FT && combo.include_ft);
    if (take) selected.push_back(static_cast<int>(c));
  }
  if (selected.empty())
    throw GeoError(ErrorCode::MISSING_COMPONENT, "no columns match combo " + combo.label());
  Eigen::MatrixXd values(static_cast<Eigen::Index>(table.rows.size()),
                         static_cast<Eigen::Index>(selected.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    for (std::size_t c = 0; c < selected.size(); ++c)
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          csv_to_double(table.rows[r][static_cast<std::size_t>(selected[c])], r + 2);
  return values;
}

int run_reduce(const json& config, const std::string& out_dir, std::uint64_t seed) {
  const std::string features_path = get_or<std::string>(config, "features", "");
  if (features_path.empty()) {
    std::cerr << "reduce: config needs \"features\" (path to features.csv)\n";
    return kExitConfig;
  }
  const double threshold = get_or(config, "threshold", 0.95);
  const std::size_t samples = get_or<std::size_t>(config, "samples", 500);
  const double scale = get_or(config, "scale", 1.0);
  const bool emit_matrix = get_or(config, "emit_matrix", false);
  const std::vector<std::string> combo_labels =
      get_or<std::vector<std::string>>(config, "combos", {"p", "p,m,k,ft"});

  const CsvTable table = read_csv_file(features_path);

  // Sidecar tells us how to decode P rows back into shapes.
  json sidecar;
  const fs::path sidecar_path = fs::path(features_path).parent_path() / "features.sidecar.json";
  if (fs::exists(sidecar_path)) {
    std::ifstream in(sidecar_path);
    in >> sidecar;
  }
  const std::string p_kind = get_or<std::string>(sidecar, "p_kind", "profile_coords");
  const std::size_t n_points = get_or<std::size_t>(sidecar, "n_points", 192);

  OutputDir out(out_dir);
  json resolved;
  resolved["command"] = "reduce";
  resolved["features"] = features_path;
  resolved["threshold"] = threshold;
  resolved["samples"] = samples;
  resolved["scale"] = scale;
  resolved["combos"] = combo_labels;
  resolved["seed"] = seed;
  resolved["p_kind"] = p_kind;
  echo_config(out, resolved);

  std::string report = "combo,n_rows,n_cols,retained_dims,retained_variance,diversity,"
                       "invalid_rate,kernel_length\n";

  for (std::size_t combo_index = 0; combo_index < combo_labels.size(); ++combo_index) {
    const ComboSpec combo = ComboSpec::parse(combo_labels[combo_index]);
    std::vector<int> selected;
    DesignMatrix matrix;
    matrix.values = select_columns(table, combo, selected);
    for (int c : selected) matrix.column_names.push_back(table.header[static_cast<std::size_t>(c)]);
    matrix.standardisation = standardise_columns(matrix.values);

    const KleBasis basis = fit_kle(matrix, threshold);

    std::string tag = combo.label();
    for (char& c : tag)
      if (c == '+') c = '-';
    if (emit_matrix) {
      // Standardised design matrix plus the sidecar that makes any
      // downstream run reproducible.
      std::string matrix_csv = "design_id";
      for (const std::string& name : matrix.column_names) matrix_csv += "," + name;
      matrix_csv += "\n";
      const int id_col = table.column("design_id");
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        matrix_csv += id_col >= 0 ? table.rows[r][static_cast<std::size_t>(id_col)]
                                  : std::to_string(r);
        for (Eigen::Index c = 0; c < matrix.values.cols(); ++c)
          matrix_csv += "," + format_double(matrix.values(static_cast<Eigen::Index>(r), c));
        matrix_csv += "\n";
      }
      out.write_text("matrix_" + tag + ".csv", matrix_csv);

      json matrix_sidecar;
      matrix_sidecar["combo"] = combo.label();
      matrix_sidecar["seed"] = seed;
      matrix_sidecar["config"] = resolved;
      matrix_sidecar["standardisation"] = {
          {"mean", matrix.standardisation->mean},
          {"stddev", matrix.standardisation->stddev},
      };
      out.write_text("matrix_" + tag + ".sidecar.json", matrix_sidecar.dump(2) + "\n");
    }

    // Artifacts: eigenvalue JSON plus eigenvector CSV per combo.
    json eigen_json;
    eigen_json["combo"] = combo.label();
    eigen_json["retained_dims"] = basis.retained_dims;
    eigen_json["variance_threshold"] = threshold;
    json values = json::array();
    for (Eigen::Index i = 0; i < basis.eigenvalues.size(); ++i)
      values.push_back(basis.eigenvalues(i));
    eigen_json["eigenvalues"] = values;
    out.write_text("kle_" + tag + "_eigenvalues.json", eigen_json.dump(2) + "\n");

    std::string vectors_csv;
    for (Eigen::Index r = 0; r < basis.eigenvectors.rows(); ++r) {
      for (Eigen::Index c = 0; c < basis.eigenvectors.cols(); ++c) {
        if (c) vectors_csv += ",";
        vectors_csv += format_double(basis.eigenvectors(r, c));
      }
      vectors_csv += "\n";
    }
    out.write_text("kle_" + tag + "_eigenvectors.csv", vectors_csv);

    const auto latents = sample_latent(basis, samples, seed + combo_index, scale);

    const double kernel_length = median_pairwise_distance(matrix.values);
    Eigen::MatrixXd decoded_rows(static_cast<Eigen::Index>(latents.size()),
                                 basis.mean.size());
    for (std::size_t i = 0; i < latents.size(); ++i)
      decoded_rows.row(static_cast<Eigen::Index>(i)) = reconstruct(basis, latents[i]);
    const double diversity = diversity_score(decoded_rows, kernel_length);

    // Validity needs a decodable P block: parameter rows feed the
    // generator, planar coordinate rows rebuild a polyline. Mesh-coordinate
    // rows have no 2D decode, so their validity column stays empty.
    std::string invalid_field = "";
    const bool decodable = p_kind == "airfoil_params" || p_kind == "profile_coords";
    if (combo.include_p && decodable) {
      // Un-standardise the P block of a reconstructed row, then rebuild the
      // shape: parameter rows feed the generator, coordinate rows a polyline.
      std::vector<std::size_t> p_slots;
      for (std::size_t c = 0; c < matrix.column_names.size(); ++c)
        if (column_kind(matrix.column_names[c]) == ColumnKind::P) p_slots.push_back(c);

      auto decode = [&](const Eigen::RowVectorXd& row) -> ClosedProfile2D {
        std::vector<double> p(p_slots.size());
        for (std::size_t i = 0; i < p_slots.size(); ++i) {
          const std::size_t c = p_slots[i];
          p[i] = row(static_cast<Eigen::Index>(c)) * matrix.standardisation->stddev[c] +
                 matrix.standardisation->mean[c];
        }
        if (p_kind == "airfoil_params") {
          if (p.size() != 11)
            throw GeoError(ErrorCode::DECODE_FAIL, "expected 11 parameter columns");
          AirfoilParams params;
          std::copy(p.begin(), p.end(), params.p.begin());
          return generate_airfoil(params, n_points);
        }
        if (p.size() < 6 || p.size() % 2 != 0)
          throw GeoError(ErrorCode::DECODE_FAIL, "coordinate row is not an (x,y) list");
        ClosedProfile2D profile;
        for (std::size_t i = 0; i + 1 < p.size(); i += 2)
          profile.points.emplace_back(p[i], p[i + 1]);
        return profile;
      };

      const ValidityReport validity = validity_rate(latents, basis, decode);
      invalid_field = format_double(validity.invalid_rate);

      std::string validity_csv = "index,invalid,decode_failed,codes\n";
      for (const ValidityEntry& entry : validity.entries) {
        validity_csv += std::to_string(entry.index);
        validity_csv += entry.invalid ? ",1" : ",0";
        validity_csv += entry.decode_failed ? ",1" : ",0";
        validity_csv += ",";
        for (std::size_t r = 0; r < entry.reasons.size(); ++r) {
          if (r) validity_csv += ";";
          validity_csv += to_string(entry.reasons[r]);
        }
        if (entry.decode_failed) validity_csv += "DECODE_FAIL";
        validity_csv += "\n";
      }
      out.write_text("validity_" + tag + ".csv", validity_csv);
    }

    report += combo.label() + "," + std::to_string(matrix.rows()) + "," +
              std::to_string(matrix.cols()) + "," + std::to_string(basis.retained_dims) + "," +
              format_double(basis.retained_variance_fraction(basis.retained_dims)) + "," +
              format_double(diversity) + "," + invalid_field + "," +
              format_double(kernel_length) + "\n";
  }

  out.write_text("reduce_report.csv", report);
  out.write_manifest("reduce");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sensitivity

int run_sensitivity(const json& config, const std::string& out_dir, std::uint64_t seed,
                    std::size_t jobs) {
  const std::size_t d = get_or<std::size_t>(config, "d", 11);
  const std::size_t n = get_or<std::size_t>(config, "n", 1024);
  const std::vector<double> epsilons = get_or<std::vector<double>>(config, "epsilons", {0.1, 0.05});
  const bool use_total = get_or(config, "use_total", false);
  const std::size_t n_points = get_or<std::size_t>(config, "n_points", 192);
  GoConfig go_config = go_config_from_json(config);

  if (d != 11) {
    std::cerr << "sensitivity: only the 11-parameter airfoil generator is wired in\n";
    return kExitConfig;
  }

  OutputDir out(out_dir);
  json resolved = go_config_to_json(go_config);
  resolved["command"] = "sensitivity";
  resolved["d"] = d;
  resolved["n"] = n;
  resolved["epsilons"] = epsilons;
  resolved["use_total"] = use_total;
  resolved["n_points"] = n_points;
  resolved["seed"] = seed;
  echo_config(out, resolved);

  const auto generator = [n_points](const std::vector<double>& params) {
    AirfoilParams p;
    std::copy(params.begin(), params.end(), p.p.begin());
    return generate_airfoil(p, n_points);
  };

  const GoStudyResult study = go_sensitivity_study(generator, go_config, d, n, seed, jobs);

  for (const auto& [name, report] : study.reports) {
    std::string tag = name;
    for (char& c : tag)
      if (c == '+') c = '-';
    std::string csv = "parameter,S,S_T,raw_S,raw_S_T";
    for (double eps : epsilons) {
      char short_eps[16];
      std::snprintf(short_eps, sizeof(short_eps), "%g", eps);
      csv += ",selected_eps" + std::string(short_eps);
    }
    csv += "\n";
    for (std::size_t i = 0; i < report.dims(); ++i) {
      csv += "x" + std::to_string(i + 1) + "," + format_double(report.first_order[i]) + "," +
             format_double(report.total_order[i]) + "," + format_double(report.raw_first[i]) +
             "," + format_double(report.raw_total[i]);
      for (double eps : epsilons) {
        const std::vector<char> mask = select_features(report, eps, use_total);
        csv += mask[i] ? ",1" : ",0";
      }
      csv += "\n";
    }
    out.write_text("sobol_" + tag + ".csv", csv);

    json report_json;
    report_json["qoi"] = name;
    report_json["qoi_kind"] = report.qoi_kind == QoiKind::VECTOR ? "vector" : "scalar";
    report_json["first_order"] = report.first_order;
    report_json["total_order"] = report.total_order;
    report_json["raw_first"] = report.raw_first;
    report_json["raw_total"] = report.raw_total;
    json masks = json::object();
    for (double eps : epsilons) {
      char short_eps[16];
      std::snprintf(short_eps, sizeof(short_eps), "%g", eps);
      const std::vector<char> mask = select_features(report, eps, use_total);
      std::vector<int> bits(mask.begin(), mask.end());
      masks[short_eps] = bits;
    }
    report_json["selected"] = masks;
    out.write_text("sobol_" + tag + ".json", report_json.dump(2) + "\n");
  }

  // Pairwise cosine / MSE between index vectors of the chosen family.
  std::string comparison = "qoi_a,qoi_b,cosine,mse\n";
  for (const auto& [name_a, report_a] : study.reports) {
    for (const auto& [name_b, report_b] : study.reports) {
      const std::vector<double>& va = use_total ? report_a.total_order : report_a.first_order;
      const std::vector<double>& vb = use_total ? report_b.total_order : report_b.first_order;
      const IndexComparison cmp = compare_index_vectors(va, vb);
      comparison += name_a + "," + name_b + ",";
      comparison += cmp.cosine ? format_double(*cmp.cosine) : std::string("undefined");
      comparison += "," + format_double(cmp.mse) + "\n";
    }
  }
  out.write_text("comparison.csv", comparison);

  json summary;
  summary["excluded_rows"] = study.excluded_rows;
  summary["retained_rows"] = study.retained_rows;
  out.write_text("study.json", summary.dump(2) + "\n");
  out.write_manifest("sensitivity");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// surrogate

int run_surrogate(const json& config, const std::string& out_dir, std::uint64_t seed) {
  const std::string features_path = get_or<std::string>(config, "features", "");
  const std::string labels_path = get_or<std::string>(config, "labels", "");
  if (features_path.empty() || labels_path.empty()) {
    std::cerr << "surrogate: config needs \"features\" and \"labels\" paths\n";
    return kExitConfig;
  }
  const std::vector<std::string> combo_labels = get_or<std::vector<std::string>>(
      config, "combos",
      {"p", "p,m", "p,k", "p,ft", "p,m,k", "p,m,ft", "p,k,ft", "p,m,k,ft"});
  const std::vector<std::string> kernel_names =
      get_or<std::vector<std::string>>(config, "kernels", {"rbf", "matern52", "rq"});
  const double train_fraction = get_or(config, "train_fraction", 0.8);

  const CsvTable table = read_csv_file(features_path);
  const std::vector<GoVector> gos = gos_from_table(table);

  const CsvTable label_table = read_csv_file(labels_path);
  const int label_id = label_table.column("design_id");
  const int label_value = label_table.column("label");
  if (label_id < 0 || label_value < 0) {
    std::cerr << "surrogate: labels.csv needs design_id and label columns\n";
    return kExitConfig;
  }
  std::map<std::string, double> label_map;
  for (const auto& row : label_table.rows)
    label_map[row[static_cast<std::size_t>(label_id)]] =
        csv_to_double(row[static_cast<std::size_t>(label_value)]);

  std::vector<double> labels;
  labels.reserve(gos.size());
  for (const GoVector& go : gos) {
    auto it = label_map.find(go.design_id);
    if (it == label_map.end()) {
      std::cerr << "surrogate: no label for design " << go.design_id << "\n";
      return kExitRuntime;
    }
    labels.push_back(it->second);
  }

  std::vector<ComboSpec> combos;
  for (const std::string& label : combo_labels) combos.push_back(ComboSpec::parse(label));
  std::vector<GprKernel> kernels;
  for (const std::string& name : kernel_names) kernels.push_back(parse_gpr_kernel(name));

  OutputDir out(out_dir);
  json resolved;
  resolved["command"] = "surrogate";
  resolved["features"] = features_path;
  resolved["labels"] = labels_path;
  resolved["combos"] = combo_labels;
  resolved["kernels"] = kernel_names;
  resolved["train_fraction"] = train_fraction;
  resolved["seed"] = seed;
  echo_config(out, resolved);

  const std::vector<AblationRow> rows =
      ablation_study(gos, labels, combos, kernels, seed, train_fraction);

  std::string csv = "combo,kernel,r2,mape,rmse,n_train,n_test,seed\n";
  for (const AblationRow& row : rows) {
    csv += row.combo + "," + to_string(row.kernel) + "," + format_double(row.metrics.r2) + "," +
           format_double(row.metrics.mape) + "," + format_double(row.metrics.rmse) + "," +
           std::to_string(row.n_train) + "," + std::to_string(row.n_test) + "," +
           std::to_string(row.seed) + "\n";
  }
  out.write_text("ablation.csv", csv);

  if (get_or(config, "emit_models", false)) {
    // Persist each combo's winning model: hyperparameters plus the
    // standardisation constants and the training snapshot it was fit on.
    const std::vector<std::size_t> order = split_order(gos.size(), seed);
    for (const AblationRow& row : rows) {
      const ComboSpec combo = ComboSpec::parse(row.combo);
      const DesignMatrix matrix = build_matrix(gos, combo, /*standardise=*/true);
      Eigen::MatrixXd x_train(row.n_train, matrix.values.cols());
      Eigen::VectorXd y_train(static_cast<Eigen::Index>(row.n_train));
      for (std::size_t i = 0; i < row.n_train; ++i) {
        x_train.row(static_cast<Eigen::Index>(i)) =
            matrix.values.row(static_cast<Eigen::Index>(order[i]));
        y_train(static_cast<Eigen::Index>(i)) = labels[order[i]];
      }
      const GprModel model = fit_gpr(x_train, y_train, row.kernel, seed);

      std::string tag = row.combo;
      for (char& c : tag)
        if (c == '+') c = '-';
      json model_json;
      model_json["combo"] = row.combo;
      model_json["kernel"] = to_string(row.kernel);
      model_json["length_scale"] = model.length_scales(0);
      model_json["signal_variance"] = model.signal_variance;
      model_json["noise_variance"] = model.noise_variance;
      model_json["y_mean"] = model.y_mean;
      model_json["y_scale"] = model.y_scale;
      model_json["log_marginal_likelihood"] = model.log_marginal_likelihood;
      model_json["seed"] = seed;
      model_json["standardisation"] = {
          {"columns", matrix.column_names},
          {"mean", matrix.standardisation->mean},
          {"stddev", matrix.standardisation->stddev},
      };
      out.write_text("model_" + tag + ".json", model_json.dump(2) + "\n");

      std::string train_csv = "design_id,label";
      for (const std::string& name : matrix.column_names) train_csv += "," + name;
      train_csv += "\n";
      for (std::size_t i = 0; i < row.n_train; ++i) {
        train_csv += gos[order[i]].design_id + "," + format_double(labels[order[i]]);
        for (Eigen::Index c = 0; c < x_train.cols(); ++c)
          train_csv += "," + format_double(x_train(static_cast<Eigen::Index>(i), c));
        train_csv += "\n";
      }
      out.write_text("model_" + tag + "_train.csv", train_csv);
    }
  }

  out.write_manifest("surrogate");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// quality

int run_quality(const json& config, const std::string& out_dir, std::uint64_t seed) {
  const std::string generated_path = get_or<std::string>(config, "generated", "");
  const std::string training_path = get_or<std::string>(config, "training", "");
  if (generated_path.empty() || training_path.empty()) {
    std::cerr << "quality: config needs \"generated\" and \"training\" paths\n";
    return kExitConfig;
  }
  const double gamma0 = get_or(config, "gamma0", 1.0);

  const CsvTable generated_table = read_csv_file(generated_path);
  const CsvTable training_table = read_csv_file(training_path);
  const std::vector<GoVector> generated_gos = gos_from_table(generated_table);
  const std::vector<GoVector> training_gos = gos_from_table(training_table);

  // Feature rows standardised with training-set statistics; qualities are
  // L1 norms of the standardised (m, k, ft) components.
  const ComboSpec all = ComboSpec::parse("p,m,k,ft");
  DesignMatrix training_matrix = build_matrix(training_gos, all, /*standardise=*/true);
  DesignMatrix generated_matrix = build_matrix(generated_gos, all, /*standardise=*/false);
  for (Eigen::Index c = 0; c < generated_matrix.values.cols(); ++c) {
    const std::size_t cs = static_cast<std::size_t>(c);
    generated_matrix.values.col(c) =
        (generated_matrix.values.col(c).array() - training_matrix.standardisation->mean[cs]) /
        training_matrix.standardisation->stddev[cs];
  }

  const GoQualityStats stats = compute_go_quality_stats(training_gos);
  Eigen::VectorXd qualities(static_cast<Eigen::Index>(generated_gos.size()));
  for (std::size_t i = 0; i < generated_gos.size(); ++i)
    qualities(static_cast<Eigen::Index>(i)) = go_quality(generated_gos[i], stats);

  double kernel_length = get_or(config, "kernel_length", 0.0);
  if (!(kernel_length > 0.0)) kernel_length = median_pairwise_distance(generated_matrix.values);

  const BatchScores scores =
      batch_scores(generated_matrix.values, training_matrix.values, qualities, kernel_length);

  OutputDir out(out_dir);
  json resolved;
  resolved["command"] = "quality";
  resolved["generated"] = generated_path;
  resolved["training"] = training_path;
  resolved["gamma0"] = gamma0;
  resolved["kernel_length"] = kernel_length;
  resolved["seed"] = seed;
  echo_config(out, resolved);

  json result;
  result["diversity"] = scores.diversity;
  result["quality"] = scores.quality;
  result["novelty"] = scores.novelty;
  result["n_generated"] = generated_gos.size();
  result["n_training"] = training_gos.size();
  result["gamma0"] = gamma0;
  result["kernel_length"] = kernel_length;
  out.write_text("scores.json", result.dump(2) + "\n");
  out.write_manifest("quality");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geoops: geometric-operator feature studies for 2D profiles and 3D meshes"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  app.add_option("--config", config_path, "JSON config file")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--seed", seed, "seed override")->capture_default_str();
  app.add_option("--jobs", jobs, "parallel worker bound")->capture_default_str();

  auto* cmd_gen = app.add_subcommand("gen-airfoils", "generate a parametric airfoil dataset");
  auto* cmd_features = app.add_subcommand("features", "compute GO feature rows per design");
  auto* cmd_reduce = app.add_subcommand("reduce", "KLE subspace learning and validity report");
  auto* cmd_sensitivity = app.add_subcommand("sensitivity", "Sobol study with GO-substituted QoIs");
  auto* cmd_surrogate = app.add_subcommand("surrogate", "GPR ablation over GO combinations");
  auto* cmd_quality = app.add_subcommand("quality", "DPP diversity/quality/novelty scores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    json config = load_config(config_path);
    if (app.count("--seed") == 0 && config.contains("seed"))
      seed = config.at("seed").get<std::uint64_t>();
    if (app.count("--jobs") == 0 && config.contains("jobs"))
      jobs = config.at("jobs").get<std::size_t>();

    if (cmd_gen->parsed()) return run_gen_airfoils(config, out_dir, seed);
    if (cmd_features->parsed()) return run_features(config, out_dir, seed, jobs);
    if (cmd_reduce->parsed()) return run_reduce(config, out_dir, seed);
    if (cmd_sensitivity->parsed()) return run_sensitivity(config, out_dir, seed, jobs);
    if (cmd_surrogate->parsed()) return run_surrogate(config, out_dir, seed);
    if (cmd_quality->parsed()) return run_quality(config, out_dir, seed);
    return kExitConfig;
  } catch (const GeoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool config_error = e.code() == ErrorCode::IO_ERROR ||
                              e.code() == ErrorCode::INVALID_ARGUMENT ||
                              e.code() == ErrorCode::PARSE_ERROR;
    return config_error ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
