#include "bridgeirt/draws_io.hpp"

#include <cstring>
#include <fstream>

namespace bridgeirt {

namespace {

constexpr char kMagic[8] = {'B', 'I', 'D', 'R', 'A', 'W', 'S', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

DrawArray real_array(const std::vector<double>& data, std::uint64_t rows, std::uint64_t width) {
  DrawArray arr;
  arr.dtype = DrawArray::f64;
  arr.dims = {rows, width};
  arr.real = data;
  return arr;
}

DrawArray byte_array(const std::vector<std::uint8_t>& data, std::uint64_t rows,
                     std::uint64_t width) {
  DrawArray arr;
  arr.dtype = DrawArray::u8;
  arr.dims = {rows, width};
  arr.bytes = data;
  return arr;
}

}  // namespace

DrawMap to_draw_map(const ChainDraws& d) {
  const auto n = static_cast<std::uint64_t>(d.n_kept);
  DrawMap out;
  const std::pair<const char*, const std::vector<double>*> scalars[] = {
      {"log_joint", &d.log_joint},     {"zeta_total", &d.zeta_total},
      {"model_size", &d.model_size},   {"eta0", &d.eta0},
      {"rho_mu", &d.rho_mu},           {"kappa2_mu", &d.kappa2_mu},
      {"omega_alpha", &d.omega_alpha}, {"kappa2_alpha", &d.kappa2_alpha},
      {"rho_beta", &d.rho_beta},       {"sigma2_beta", &d.sigma2_beta}};
  for (const auto& [name, vec] : scalars) {
    DrawArray arr;
    arr.dtype = DrawArray::f64;
    arr.dims = {n};
    arr.real = *vec;
    out.emplace(name, std::move(arr));
  }
  // Toggled-off matrices are simply absent from the map.
  if (!d.beta0.empty() || d.I == 0) out.emplace("beta0", real_array(d.beta0, n, d.I));
  if (!d.beta1.empty() || d.I == 0) out.emplace("beta1", real_array(d.beta1, n, d.I));
  out.emplace("linpred", real_array(d.linpred, n, d.I));
  if (!d.mu.empty() || d.J == 0) out.emplace("mu", real_array(d.mu, n, d.J));
  if (!d.alpha.empty() || d.J == 0) out.emplace("alpha", real_array(d.alpha, n, d.J));
  out.emplace("eta", real_array(d.eta, n, d.p));
  out.emplace("zeta", byte_array(d.zeta, n, d.I));
  out.emplace("xi", byte_array(d.xi, n, d.p));
  return out;
}

void write_draws(const std::string& path, const DrawMap& draws) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write draws file: " + path);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(draws.size()));
  for (const auto& [name, arr] : draws) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint8_t>(out, arr.dtype);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(arr.dims.size()));
    for (auto dim : arr.dims) put<std::uint64_t>(out, dim);
    if (arr.dtype == DrawArray::f64)
      out.write(reinterpret_cast<const char*>(arr.real.data()),
                static_cast<std::streamsize>(arr.real.size() * sizeof(double)));
    else
      out.write(reinterpret_cast<const char*>(arr.bytes.data()),
                static_cast<std::streamsize>(arr.bytes.size()));
  }
  if (!out) throw DataError("write failed for draws file: " + path);
}

void write_draws(const std::string& path, const ChainDraws& draws) {
  write_draws(path, to_draw_map(draws));
}

DrawMap read_draws(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open draws file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a draws file: " + path);

  DrawMap out;
  const std::uint32_t count = get<std::uint32_t>(in);
  for (std::uint32_t q = 0; q < count; ++q) {
    const std::uint16_t name_len = get<std::uint16_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    DrawArray arr;
    arr.dtype = static_cast<DrawArray::Dtype>(get<std::uint8_t>(in));
    const std::uint8_t ndim = get<std::uint8_t>(in);
    std::uint64_t total = 1;
    for (std::uint8_t k = 0; k < ndim; ++k) {
      arr.dims.push_back(get<std::uint64_t>(in));
      total *= arr.dims.back();
    }
    if (arr.dtype == DrawArray::f64) {
      arr.real.resize(total);
      in.read(reinterpret_cast<char*>(arr.real.data()),
              static_cast<std::streamsize>(total * sizeof(double)));
    } else {
      arr.bytes.resize(total);
      in.read(reinterpret_cast<char*>(arr.bytes.data()), static_cast<std::streamsize>(total));
    }
    if (!in) throw DataError("truncated draws file: " + path);
    out.emplace(std::move(name), std::move(arr));
  }
  return out;
}

void export_draws_csv(const std::string& path, const std::string& name,
                      const std::vector<DrawMap>& per_chain) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "chain,draw,index,value\n";
  for (std::size_t c = 0; c < per_chain.size(); ++c) {
    const auto it = per_chain[c].find(name);
    if (it == per_chain[c].end()) throw DataError("quantity not stored: " + name);
    const DrawArray& arr = it->second;
    for (std::uint64_t s = 0; s < arr.rows(); ++s)
      for (std::uint64_t k = 0; k < arr.width(); ++k)
        out << c << ',' << s << ',' << k << ',' << arr.at(s, k) << '\n';
  }
}

}  // namespace bridgeirt
