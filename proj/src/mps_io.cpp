#include "magicmps/mps_io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace magicmps {

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  if (!is) throw ConfigError("mps load: truncated file");
  return v;
}

}  // namespace

void save_mps(const std::string& path, const MatrixProductState& psi) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("mps save: cannot open " + path);
  os.write("MMPS", 4);
  write_u32(os, 1);
  write_u32(os, static_cast<std::uint32_t>(psi.n_sites()));
  for (std::size_t i = 0; i < psi.n_sites(); ++i) {
    const DenseTensor& t = psi.site(i);
    write_u32(os, static_cast<std::uint32_t>(t.dim(0)));
    write_u32(os, static_cast<std::uint32_t>(t.dim(1)));
    write_u32(os, static_cast<std::uint32_t>(t.dim(2)));
  }
  for (std::size_t i = 0; i < psi.n_sites(); ++i) {
    const auto& data = psi.site(i).data();
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(cx)));
  }
  if (!os) throw ConfigError("mps save: write failed for " + path);

  nlohmann::json meta;
  meta["format"] = "magicmps-mps";
  meta["version"] = 1;
  meta["n_sites"] = psi.n_sites();
  std::vector<std::size_t> phys, bonds;
  for (std::size_t i = 0; i < psi.n_sites(); ++i) phys.push_back(psi.phys_dim(i));
  for (std::size_t i = 0; i + 1 < psi.n_sites(); ++i) bonds.push_back(psi.site(i).dim(2));
  meta["physical_dims"] = phys;
  meta["bond_dims"] = bonds;
  if (psi.ortho_center())
    meta["ortho_center"] = *psi.ortho_center();
  else
    meta["ortho_center"] = nullptr;
  std::ofstream js(path + ".json");
  if (!js) throw ConfigError("mps save: cannot open " + path + ".json");
  js << meta.dump(2) << "\n";
}

MatrixProductState load_mps(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("mps load: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "MMPS", 4) != 0)
    throw ConfigError("mps load: bad magic in " + path);
  std::uint32_t version = read_u32(is);
  if (version != 1) throw ConfigError("mps load: unsupported version");
  std::uint32_t n = read_u32(is);

  std::vector<std::vector<std::size_t>> shapes(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::size_t l = read_u32(is), d = read_u32(is), r = read_u32(is);
    shapes[i] = {l, d, r};
  }
  std::vector<DenseTensor> sites;
  sites.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    DenseTensor t(shapes[i]);
    is.read(reinterpret_cast<char*>(t.data().data()),
            static_cast<std::streamsize>(t.data().size() * sizeof(cx)));
    if (!is) throw ConfigError("mps load: truncated payload");
    sites.push_back(std::move(t));
  }
  MatrixProductState psi(std::move(sites));

  std::ifstream js(path + ".json");
  if (js) {
    nlohmann::json meta = nlohmann::json::parse(js, nullptr, false);
    if (!meta.is_discarded() && meta.contains("ortho_center") && meta["ortho_center"].is_number())
      psi.set_ortho_center(meta["ortho_center"].get<std::size_t>());
  }
  return psi;
}

}  // namespace magicmps
