#include "twistlab/registry.hpp"

#include <cstdlib>

#include "twistlab/error.hpp"
#include "twistlab/tau.hpp"

namespace twistlab {

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("TWISTLAB_DATA_DIR"); env && *env) return env;
  return TWISTLAB_DATA_DIR;
}

EllipticCurveSpec FormRegistry::curve(const std::string& name) {
  if (auto it = curves_.find(name); it != curves_.end()) return it->second;
  std::filesystem::path path;
  if (name.rfind("curve:", 0) == 0)
    path = name.substr(6);
  else
    path = data_dir() / "curves" / (name + ".curve");
  if (!std::filesystem::exists(path)) throw ConfigError("unknown form or curve '" + name + "' (no " + path.string() + ")");
  auto spec = read_curve_file(path);
  curves_.emplace(name, spec);
  return spec;
}

HeckeForm FormRegistry::get(const std::string& name, i64 limit) {
  limit = std::max<i64>(limit, 2);
  if (auto it = forms_.find(name); it != forms_.end()) {
    if (it->second.limit() >= limit) return it->second;
    if (name.rfind("table:", 0) == 0)
      throw CapacityError("table file " + name.substr(6) + " ends at " + std::to_string(it->second.limit()) +
                          ", " + std::to_string(limit) + " needed");
  }
  HeckeForm form = [&] {
    if (name == "delta") return HeckeForm(std::make_shared<const EigenvalueTable>(tau_table(limit)));
    if (name.rfind("table:", 0) == 0) {
      auto f = read_table_file(name.substr(6));
      if (f.limit() < limit)
        throw CapacityError("table file " + name.substr(6) + " ends at " + std::to_string(f.limit()) + ", " +
                            std::to_string(limit) + " needed");
      return f;
    }
    return HeckeForm(std::make_shared<const EigenvalueTable>(curve_table(curve(name), limit)));
  }();
  forms_.insert_or_assign(name, form);
  return form;
}

TwistBsdData FormRegistry::bsd(const std::string& name, i64 limit, LocalProvider provider) {
  TwistBsdData tw{curve(name), get(name, limit), provider, {}};
  if (provider == LocalProvider::TableFile) {
    const auto path = data_dir() / "local" / (tw.curve.label + ".local");
    if (!std::filesystem::exists(path)) throw DataGapError("no local twist data file " + path.string());
    tw.local = read_local_file(path);
  }
  return tw;
}

}  // namespace twistlab
