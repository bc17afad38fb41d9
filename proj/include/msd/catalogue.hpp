#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msd/pauli.hpp"

namespace msd {

// One block of the flat-text catalogue: a stabilizer code, a triorthogonal
// matrix, or both under one name.
struct CatalogueEntry {
  std::string name;
  std::optional<StabilizerCode> code;
  std::optional<TriorthogonalMatrix> matrix;
};

struct Catalogue {
  std::vector<CatalogueEntry> entries;

  const CatalogueEntry& get(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw std::runtime_error("catalogue: no entry named '" + name + "'");
  }
};

// Flat text, one code per block. Lines: `name`, `n`, `k`,
// `generator <letters>`, `logical_x`/`logical_z <letters>`,
// `triorthogonal_row <bits>`. `#` starts a comment.
inline Catalogue parse_catalogue(std::istream& in) {
  Catalogue cat;
  CatalogueEntry* cur = nullptr;
  std::string line;
  int lineno = 0;
  auto err = [&](const std::string& msg) {
    throw std::runtime_error("catalogue line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "name") {
      std::string name;
      if (!(ls >> name)) err("missing name");
      cat.entries.push_back({name, {}, {}});
      cur = &cat.entries.back();
      continue;
    }
    if (!cur) err("'" + key + "' before any 'name'");
    auto need_code = [&]() -> StabilizerCode& {
      if (!cur->code) cur->code = StabilizerCode{cur->name, 0, 0, {}, {}, {}};
      return *cur->code;
    };
    auto need_matrix = [&]() -> TriorthogonalMatrix& {
      if (!cur->matrix) cur->matrix = TriorthogonalMatrix{cur->name, 0, {}};
      return *cur->matrix;
    };
    if (key == "n") {
      if (!(ls >> need_code().n)) err("bad n");
    } else if (key == "k") {
      if (!(ls >> need_code().k)) err("bad k");
    } else if (key == "generator" || key == "logical_x" || key == "logical_z") {
      std::string letters;
      if (!(ls >> letters)) err("missing Pauli letters");
      PauliString p;
      try {
        p = PauliString::from_letters(letters);
      } catch (const std::exception& e) {
        err(e.what());
      }
      auto& code = need_code();
      if (key == "generator") code.generators.push_back(p);
      else if (key == "logical_x") code.logical_x.push_back(p);
      else code.logical_z.push_back(p);
    } else if (key == "triorthogonal_row") {
      std::string bits;
      if (!(ls >> bits)) err("missing bits");
      auto& m = need_matrix();
      if (m.columns == 0) m.columns = static_cast<int>(bits.size());
      if (static_cast<int>(bits.size()) != m.columns) err("ragged triorthogonal rows");
      std::uint64_t row = 0;
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') row |= 1ull << i;
        else if (bits[i] != '0') err("bits must be 0/1");
      }
      m.rows.push_back(row);
    } else {
      err("unknown key '" + key + "'");
    }
  }
  return cat;
}

inline Catalogue load_catalogue(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("catalogue: cannot open '" + path + "'");
  return parse_catalogue(in);
}

}  // namespace msd
