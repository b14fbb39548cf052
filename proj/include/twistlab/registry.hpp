#pragma once

// Named forms. Built-in names: "delta" (level 1, weight 12) and every curve file shipped in
// data/curves ("11a1", "14a1", ...). "table:<path>" loads an eigenvalue table file and
// "curve:<path>" a curve metadata file. Tables are cached and only ever grow.

#include <filesystem>
#include <map>
#include <string>

#include "twistlab/apps.hpp"
#include "twistlab/elliptic.hpp"
#include "twistlab/hecke.hpp"

namespace twistlab {

/// $TWISTLAB_DATA_DIR if set, else the source-tree data directory.
std::filesystem::path data_dir();

class FormRegistry {
 public:
  /// Form with an eigenvalue table reaching at least `limit` (table files: exactly their length;
  /// CapacityError when that is short).
  HeckeForm get(const std::string& name, i64 limit);
  /// Curve metadata for a curve name ("11a1" or "curve:<path>").
  EllipticCurveSpec curve(const std::string& name);
  /// Curve, its form to `limit`, and local twist data from data/local/<label>.local.
  TwistBsdData bsd(const std::string& name, i64 limit, LocalProvider provider = LocalProvider::TableFile);

 private:
  std::map<std::string, HeckeForm> forms_;
  std::map<std::string, EllipticCurveSpec> curves_;
};

}  // namespace twistlab
