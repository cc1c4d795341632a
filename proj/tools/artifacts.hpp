#pragma once

#include <string>
#include <vector>

#include "hxz/serialize.hpp"

namespace hxz::cli {

std::string sha256_hex(const std::string& data);

// Writes artifacts into one directory; each embeds the run config and a hash of its payload.
class ArtifactWriter {
public:
    ArtifactWriter(std::string dir, json config);

    std::string write_json(const std::string& name, const json& payload);
    std::string write_jsonl(const std::string& name, const std::vector<json>& rows);
    std::string write_csv(const std::string& name, const std::string& header, const std::vector<std::string>& rows);
    std::string write_svg(const std::string& name, const std::string& body);

    const std::vector<std::string>& written() const { return written_; }
    const json& config() const { return config_; }

private:
    std::string path(const std::string& name) const;
    void save(const std::string& p, const std::string& text);

    std::string dir_;
    json config_;
    std::vector<std::string> written_;
};

}  // namespace hxz::cli
