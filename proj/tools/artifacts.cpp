#include "artifacts.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "hxz/errors.hpp"

namespace hxz::cli {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::NumericalFailure, "SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

ArtifactWriter::ArtifactWriter(std::string dir, json config) : dir_(std::move(dir)), config_(std::move(config)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(ErrorKind::InvalidInput, "cannot create output directory " + dir_ + ": " + ec.message());
}

std::string ArtifactWriter::path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

void ArtifactWriter::save(const std::string& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + p);
    out << text;
    written_.push_back(p);
}

std::string ArtifactWriter::write_json(const std::string& name, const json& payload) {
    json doc{{"config", config_}, {"sha256", sha256_hex(payload.dump())}, {"result", payload}};
    std::string p = path(name);
    save(p, doc.dump(2) + "\n");
    return p;
}

std::string ArtifactWriter::write_jsonl(const std::string& name, const std::vector<json>& rows) {
    std::string body;
    for (const auto& r : rows) body += r.dump() + "\n";
    json head{{"config", config_}, {"sha256", sha256_hex(body)}, {"rows", rows.size()}};
    std::string p = path(name);
    save(p, head.dump() + "\n" + body);
    return p;
}

std::string ArtifactWriter::write_csv(const std::string& name, const std::string& header,
                                      const std::vector<std::string>& rows) {
    std::string body = header + "\n";
    for (const auto& r : rows) body += r + "\n";
    std::string p = path(name);
    save(p, "# config " + config_.dump() + "\n# sha256 " + sha256_hex(body) + "\n" + body);
    return p;
}

std::string ArtifactWriter::write_svg(const std::string& name, const std::string& body) {
    std::string cfg = config_.dump();
    // "--" may not appear inside an XML comment
    for (std::size_t k = cfg.find("--"); k != std::string::npos; k = cfg.find("--", k)) cfg.replace(k, 2, "- -");
    std::string meta = "<!-- config " + cfg + " sha256 " + sha256_hex(body) + " -->\n";
    std::size_t cut = body.find('\n');
    std::string p = path(name);
    save(p, body.substr(0, cut + 1) + meta + body.substr(cut + 1));
    return p;
}

}  // namespace hxz::cli
