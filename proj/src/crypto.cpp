#include "lwgas/crypto.hpp"

#include <memory>

#include <openssl/evp.h>

#include "lwgas/error.hpp"

namespace lwgas::crypto {

namespace {

struct CtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

[[noreturn]] void openssl_failure(const char* what) {
  throw Error(ErrorKind::kInvalidArgument, std::string("openssl: ") + what);
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      openssl_failure("digest init");
    }
  }
  void update(std::span<const std::uint8_t> data) {
    if (EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) openssl_failure("digest update");
  }
  Digest finish() {
    Digest out{};
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 || len != out.size()) {
      openssl_failure("digest final");
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx_;
};

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) {
  Sha256 h;
  h.update(data);
  return h.finish();
}

Digest derive_key(std::string_view label,
                  std::initializer_list<std::span<const std::uint8_t>> parts) {
  Sha256 h;
  h.update({reinterpret_cast<const std::uint8_t*>(label.data()), label.size()});
  for (auto part : parts) {
    const std::uint8_t len[4] = {
        static_cast<std::uint8_t>(part.size() >> 24), static_cast<std::uint8_t>(part.size() >> 16),
        static_cast<std::uint8_t>(part.size() >> 8), static_cast<std::uint8_t>(part.size())};
    h.update(len);
    h.update(part);
  }
  return h.finish();
}

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) return false;
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= a[i] ^ b[i];
  return diff == 0;
}

Bytes seal(const Key& key, const Nonce& nonce, std::span<const std::uint8_t> plaintext,
           std::span<const std::uint8_t> aad) {
  std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter> ctx(EVP_CIPHER_CTX_new());
  if (!ctx) openssl_failure("cipher ctx");
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceBytes, nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) != 1) {
    openssl_failure("encrypt init");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
    openssl_failure("encrypt aad");
  }
  Bytes out(plaintext.size() + kTagBytes);
  if (EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1) {
    openssl_failure("encrypt update");
  }
  int total = len;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1) openssl_failure("encrypt final");
  total += len;
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagBytes, out.data() + total) != 1) {
    openssl_failure("get tag");
  }
  out.resize(static_cast<std::size_t>(total) + kTagBytes);
  return out;
}

Bytes open(const Key& key, const Nonce& nonce, std::span<const std::uint8_t> sealed,
           std::span<const std::uint8_t> aad) {
  if (sealed.size() < kTagBytes) throw Error(ErrorKind::kTagFailure, "ciphertext shorter than tag");
  const auto body = sealed.first(sealed.size() - kTagBytes);
  Bytes tag(sealed.end() - kTagBytes, sealed.end());
  std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter> ctx(EVP_CIPHER_CTX_new());
  if (!ctx) openssl_failure("cipher ctx");
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceBytes, nullptr) != 1 ||
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) != 1) {
    openssl_failure("decrypt init");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
    openssl_failure("decrypt aad");
  }
  Bytes out(body.size() + kTagBytes);
  if (EVP_DecryptUpdate(ctx.get(), out.data(), &len, body.data(), static_cast<int>(body.size())) != 1) {
    throw Error(ErrorKind::kTagFailure, "decryption failed");
  }
  int total = len;
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagBytes, tag.data()) != 1) {
    openssl_failure("set tag");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + total, &len) != 1) {
    throw Error(ErrorKind::kTagFailure, "authentication tag mismatch");
  }
  total += len;
  out.resize(static_cast<std::size_t>(total));
  return out;
}

Nonce random_nonce(Rng& rng) {
  Nonce n{};
  auto raw = random_bytes(rng, n.size());
  std::copy(raw.begin(), raw.end(), n.begin());
  return n;
}

}  // namespace lwgas::crypto
