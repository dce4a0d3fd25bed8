/*
 * Copyright (C) 2026 The phantomlint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phantomlint/symbol_table.hpp"

namespace phantomlint {

/// Persisted table format: 4-byte magic, little-endian uint32 format
/// version, then a CBOR document holding the flattened entries. Only the
/// save/load round trip is contractual; the payload layout may change with
/// the version number.
class SymbolTableCodec {
public:
  static constexpr char kMagic[4] = {'P', 'L', 'S', 'T'};
  static constexpr std::uint32_t kFormatVersion = 1;

  static void save(const SymbolTable &table, const std::filesystem::path &path) {
    nlohmann::json doc;
    doc["fingerprint"] = table.fingerprint();
    doc["warnings"] = table.warnings();
    nlohmann::json classes = nlohmann::json::object();
    for (const auto &[name, entry] : table.classes()) {
      nlohmann::json jc;
      jc["constants"] = entry.constants;
      nlohmann::json methods = nlohmann::json::array();
      for (const auto &[_, sigs] : entry.methods_by_name)
        for (const auto &sig : sigs)
          methods.push_back({{"d", sig.descriptor()},
                             {"c", sig.declaring_class.value}});
      jc["methods"] = std::move(methods);
      jc["externals"] = entry.external_supers;
      classes[name.value] = std::move(jc);
    }
    doc["classes"] = std::move(classes);

    std::vector<std::uint8_t> payload = nlohmann::json::to_cbor(doc);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoFailure("cannot open for writing: " + path.string());
    out.write(kMagic, 4);
    std::uint8_t version_bytes[4] = {
        kFormatVersion & 0xFF, (kFormatVersion >> 8) & 0xFF,
        (kFormatVersion >> 16) & 0xFF, (kFormatVersion >> 24) & 0xFF};
    out.write(reinterpret_cast<const char *>(version_bytes), 4);
    out.write(reinterpret_cast<const char *>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out)
      throw IoFailure("short write: " + path.string());
  }

  static SymbolTable load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IoFailure("cannot open: " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::string_view(magic, 4) != std::string_view(kMagic, 4))
      throw IoFailure("not a symbol table file: " + path.string());
    std::uint8_t version_bytes[4] = {};
    in.read(reinterpret_cast<char *>(version_bytes), 4);
    if (in.gcount() != 4)
      throw IoFailure("truncated header: " + path.string());
    std::uint32_t version = version_bytes[0] | (version_bytes[1] << 8) |
                            (version_bytes[2] << 16) |
                            (std::uint32_t(version_bytes[3]) << 24);
    if (version != kFormatVersion)
      throw VersionMismatch("table format version " + std::to_string(version) +
                            " is not supported (expected " +
                            std::to_string(kFormatVersion) + ")");

    std::vector<std::uint8_t> payload{std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>()};
    nlohmann::json doc;
    try {
      doc = nlohmann::json::from_cbor(payload);
    } catch (const nlohmann::json::exception &e) {
      throw IoFailure("corrupt table payload in " + path.string() + ": " +
                      e.what());
    }

    SymbolTable table;
    try {
      table.fingerprint_ = doc.at("fingerprint").get<std::string>();
      table.warnings_ = doc.at("warnings").get<std::vector<std::string>>();
      for (const auto &[name, jc] : doc.at("classes").items()) {
        ClassEntry entry;
        entry.name = QualifiedName(name);
        for (const auto &c : jc.at("constants"))
          entry.constants.insert(c.get<std::string>());
        for (const auto &jm : jc.at("methods")) {
          MethodSig sig = decode_descriptor(jm.at("d").get<std::string>());
          sig.declaring_class = QualifiedName(jm.at("c").get<std::string>());
          entry.methods_by_name[sig.name].push_back(std::move(sig));
        }
        entry.external_supers =
            jc.at("externals").get<std::vector<std::string>>();
        table.by_class_.emplace(entry.name, std::move(entry));
      }
    } catch (const nlohmann::json::exception &e) {
      throw IoFailure("malformed table payload in " + path.string() + ": " +
                      e.what());
    }
    table.rebuild_simple_index();
    return table;
  }
};

inline void save_table(const SymbolTable &table,
                       const std::filesystem::path &path) {
  SymbolTableCodec::save(table, path);
}

inline SymbolTable load_table(const std::filesystem::path &path) {
  return SymbolTableCodec::load(path);
}

} // namespace phantomlint
