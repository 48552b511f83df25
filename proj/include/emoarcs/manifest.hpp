#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "emoarcs/core.hpp"

namespace emoarcs {

/// Run manifest written alongside every CLI output: the exact command, its
/// parameters, seed, content hashes of the inputs, and the produced files.
/// Contains nothing volatile, so identical runs write identical manifests.
class Manifest {
 public:
  explicit Manifest(std::string subcommand) {
    j_["tool"] = "emoarcs";
    j_["version"] = std::string(kVersion);
    j_["command"] = std::move(subcommand);
    j_["inputs"] = nlohmann::json::object();
    j_["outputs"] = nlohmann::json::array();
  }

  void set_params(nlohmann::json params) { j_["params"] = std::move(params); }
  void set_seed(std::uint64_t seed) { j_["seed"] = seed; }

  /// The exact invocation that produced the outputs.
  void set_argv(std::string line) { j_["argv"] = std::move(line); }

  void add_input(const std::filesystem::path& path) {
    j_["inputs"][path.string()] = to_hex(hash_file(path));
  }

  void add_output(const std::filesystem::path& path) {
    j_["outputs"].push_back(path.string());
  }

  const nlohmann::json& json() const { return j_; }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest: " + path.string());
    out << j_.dump(2) << '\n';
  }

 private:
  nlohmann::json j_;
};

}  // namespace emoarcs
