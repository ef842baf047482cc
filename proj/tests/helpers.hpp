#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "utiliproc/utiliproc.hpp"

namespace testutil {

using namespace utiliproc;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string models_dir() { return UTILIPROC_MODELS_DIR; }
inline std::string fixtures_dir() { return UTILIPROC_FIXTURES_DIR; }

inline Model load_model(const std::string& name) {
  ParseResult r = parse_model(read_file(models_dir() + "/" + name));
  if (!r.ok()) {
    std::string what = "parse of " + name + " failed:";
    for (const auto& d : r.diagnostics.items) what += "\n  " + d.str();
    throw std::runtime_error(what);
  }
  return std::move(r.model);
}

inline Resource res(std::initializer_list<const char*> atoms) {
  Resource r;
  for (const char* a : atoms) r.add(a);
  return r;
}

inline Action act(std::initializer_list<const char*> factors) {
  std::vector<std::string> fs;
  for (const char* f : factors) fs.emplace_back(f);
  return Action(std::move(fs));
}

// The banker model's resources, named as in the worked examples.
struct BankerWorld {
  Model model = load_model("banker.upm");
  Resource r_client = res({"Acnt", "r1"});
  Resource r_banker = res({"USB", "r2"});
  Resource r_attacker = res({"r1"});
  Resource r_full = res({"Acnt", "r1", "USB", "r2"});
  Resource r_attack_full = res({"r1", "USB", "r2"});
};

}  // namespace testutil
