#include "segqa/hash.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <vector>

#include "segqa/errors.hpp"

namespace segqa {

namespace fs = std::filesystem;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw IoError("sha256: init failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, size_t len) {
    if (EVP_DigestUpdate(ctx_, data, len) != 1) throw IoError("sha256: update failed");
  }

  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, digest, &len) != 1) throw IoError("sha256: final failed");
    static const char* kHex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

void update_from_file(Sha256& h, const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("sha256: cannot read " + path.string());
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof(buf));
    if (f.gcount() > 0) h.update(buf, static_cast<size_t>(f.gcount()));
  }
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file_hex(const fs::path& path) {
  Sha256 h;
  update_from_file(h, path);
  return h.hex();
}

std::string sha256_dir_hex(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("sha256: not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::vector<std::string> rels;
  rels.reserve(files.size());
  for (const auto& p : files) rels.push_back(fs::relative(p, dir).generic_string());
  std::vector<size_t> order(files.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rels[a] < rels[b]; });

  Sha256 h;
  for (size_t i : order) {
    h.update(rels[i].data(), rels[i].size());
    h.update("\0", 1);
    update_from_file(h, files[i]);
  }
  return h.hex();
}

}  // namespace segqa
