#ifndef RADIOMAP_NN_CHECKPOINT_HPP
#define RADIOMAP_NN_CHECKPOINT_HPP

// Checkpoint layout (little-endian):
//
//   char[4]  magic "RGCK"
//   u16      format version (kCheckpointFormatVersion)
//   u8       model kind (ModelKind)
//   u32 x 7  latent, hidden, encoder hidden layers, decoder hidden layers,
//            block hidden layers, FiLM hidden layers, blocks
//   u8 x 2   use_ray, per_block_film
//   f64 x 16 node mean[4], node std[4], scalar mean[3], scalar std[3],
//            target mean, target std
//   f64 x 2  oracle wall loss, oracle vegetation loss
//   u32      tensor count
//   per tensor, in visitor order: u32 element count, f32[count]

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "radiomap/binary_io.hpp"
#include "radiomap/nn/model.hpp"
#include "radiomap/nn/tabular.hpp"
#include "radiomap/oracle.hpp"

namespace radiomap::nn {

enum class ModelKind : std::uint8_t { gnn = 0, gnn_no_ray = 1, tabular = 2, oracle = 3 };

inline std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::gnn: return "gnn";
    case ModelKind::gnn_no_ray: return "gnn_no_ray";
    case ModelKind::tabular: return "tabular";
    case ModelKind::oracle: return "oracle";
  }
  return "unknown";
}

inline constexpr char kCheckpointMagic[] = "RGCK";
inline constexpr std::uint16_t kCheckpointFormatVersion = 1;

/// A trained predictor of any supported kind. Only the member matching
/// `kind` is meaningful.
template <typename T>
struct Checkpoint {
  ModelKind kind = ModelKind::gnn;
  ModelParams<T> gnn;
  TabularParams<T> tabular;
  OracleParams oracle;

  const ModelConfig& config() const { return kind == ModelKind::tabular ? tabular.config : gnn.config; }
  const Normalization& norm() const { return kind == ModelKind::tabular ? tabular.norm : gnn.norm; }
};

template <typename T>
Checkpoint<T> make_checkpoint(ModelParams<T> params) {
  Checkpoint<T> c;
  c.kind = params.config.use_ray ? ModelKind::gnn : ModelKind::gnn_no_ray;
  c.gnn = std::move(params);
  return c;
}

template <typename T>
Checkpoint<T> make_checkpoint(TabularParams<T> params) {
  Checkpoint<T> c;
  c.kind = ModelKind::tabular;
  c.tabular = std::move(params);
  return c;
}

template <typename T>
Checkpoint<T> make_oracle_checkpoint(const OracleParams& oracle = {}) {
  Checkpoint<T> c;
  c.kind = ModelKind::oracle;
  c.oracle = oracle;
  return c;
}

template <typename T>
ByteWriter encode_checkpoint(const Checkpoint<T>& ck) {
  ByteWriter w;
  w.magic({kCheckpointMagic, 4});
  w.u16(kCheckpointFormatVersion);
  w.u8(static_cast<std::uint8_t>(ck.kind));
  const ModelConfig& c = ck.config();
  for (std::size_t v : {c.latent, c.hidden, c.encoder_hidden_layers, c.decoder_hidden_layers,
                        c.block_hidden_layers, c.film_hidden_layers, c.blocks})
    w.u32(static_cast<std::uint32_t>(v));
  w.u8(c.use_ray ? 1 : 0);
  w.u8(c.per_block_film ? 1 : 0);
  const Normalization& n = ck.norm();
  for (double v : n.node_mean) w.f64(v);
  for (double v : n.node_std) w.f64(v);
  for (double v : n.scalar_mean) w.f64(v);
  for (double v : n.scalar_std) w.f64(v);
  w.f64(n.target_mean);
  w.f64(n.target_std);
  w.f64(ck.oracle.wall_loss_db);
  w.f64(ck.oracle.vegetation_loss_db);

  std::vector<std::span<const T>> tensors;
  auto collect = [&](std::span<const T> s) { tensors.push_back(s); };
  if (ck.kind == ModelKind::gnn || ck.kind == ModelKind::gnn_no_ray)
    visit_model_tensors(collect, ck.gnn);
  else if (ck.kind == ModelKind::tabular)
    visit_tabular_tensors(collect, ck.tabular);
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& s : tensors) {
    w.u32(static_cast<std::uint32_t>(s.size()));
    w.f32_array(s);
  }
  return w;
}

template <typename T>
Checkpoint<T> decode_checkpoint(std::vector<unsigned char> bytes, const std::string& what = "checkpoint") {
  ByteReader r(std::move(bytes), what);
  r.expect_magic({kCheckpointMagic, 4});
  const auto version = r.u16();
  if (version != kCheckpointFormatVersion)
    fail(ErrorCategory::version_mismatch, what + ": format version " + std::to_string(version) +
                                              ", expected " + std::to_string(kCheckpointFormatVersion));
  Checkpoint<T> ck;
  const auto kind = r.u8();
  if (kind > static_cast<std::uint8_t>(ModelKind::oracle))
    fail(ErrorCategory::corrupt_file, what + ": unknown model kind");
  ck.kind = static_cast<ModelKind>(kind);

  ModelConfig c;
  for (std::size_t* v : {&c.latent, &c.hidden, &c.encoder_hidden_layers, &c.decoder_hidden_layers,
                         &c.block_hidden_layers, &c.film_hidden_layers, &c.blocks}) {
    *v = r.u32();
    if (*v > 1u << 16) fail(ErrorCategory::corrupt_file, what + ": implausible model size");
  }
  c.use_ray = r.u8() != 0;
  c.per_block_film = r.u8() != 0;
  Normalization n;
  for (double& v : n.node_mean) v = r.f64();
  for (double& v : n.node_std) v = r.f64();
  for (double& v : n.scalar_mean) v = r.f64();
  for (double& v : n.scalar_std) v = r.f64();
  n.target_mean = r.f64();
  n.target_std = r.f64();
  ck.oracle.wall_loss_db = r.f64();
  ck.oracle.vegetation_loss_db = r.f64();

  std::vector<std::span<T>> tensors;
  auto collect = [&](std::span<T> s) { tensors.push_back(s); };
  if (ck.kind == ModelKind::gnn || ck.kind == ModelKind::gnn_no_ray) {
    if (c.latent == 0 || c.hidden == 0 || c.blocks == 0)
      fail(ErrorCategory::corrupt_file, what + ": empty model configuration");
    ck.gnn = init_params<T>(0, c);
    ck.gnn.norm = n;
    visit_model_tensors(collect, ck.gnn);
  } else if (ck.kind == ModelKind::tabular) {
    ck.tabular = init_tabular<T>(0, c);
    ck.tabular.norm = n;
    visit_tabular_tensors(collect, ck.tabular);
  } else {
    ck.gnn.config = c;
    ck.gnn.norm = n;
  }
  const auto count = r.u32();
  if (count != tensors.size()) fail(ErrorCategory::corrupt_file, what + ": tensor count mismatch");
  for (auto& s : tensors) {
    if (r.u32() != s.size()) fail(ErrorCategory::corrupt_file, what + ": tensor shape mismatch");
    const auto values = r.f32_array(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<T>(values[i]);
  }
  r.expect_end();
  return ck;
}

template <typename T>
void save_checkpoint(const Checkpoint<T>& ck, const std::filesystem::path& path) {
  write_file_atomic(path, encode_checkpoint(ck));
}

template <typename T>
Checkpoint<T> load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint<T>(read_file_bytes(path), path.string());
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_CHECKPOINT_HPP
