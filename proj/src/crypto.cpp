#include "pixlock/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/kdf.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <memory>

namespace pixlock::crypto {

namespace {

struct CipherCtxFree {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
struct PkeyFree {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PkeyCtxFree {
    void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;
using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree>;

CipherCtx new_cipher_ctx() {
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw CryptoError("EVP_CIPHER_CTX_new failed");
    return ctx;
}

void check_key(ByteView key) {
    if (key.size() != kSymKeyBytes) {
        throw ValidationError("symmetric key must be 32 bytes, got " +
                              std::to_string(key.size()));
    }
}

}  // namespace

Bytes random_bytes(std::size_t n) {
    Bytes out(n);
    if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
        throw CryptoError("RAND_bytes failed");
    }
    return out;
}

Digest sha256(ByteView data) {
    Digest out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Bytes hmac_sha256(ByteView key, ByteView data) {
    Bytes out(kMacBytes);
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
              data.size(), out.data(), &len) ||
        len != kMacBytes) {
        throw CryptoError("HMAC-SHA256 failed");
    }
    return out;
}

Bytes hkdf_sha256(ByteView ikm, ByteView info, std::size_t out_len) {
    PkeyCtx ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
    if (!ctx) throw CryptoError("HKDF context allocation failed");
    Bytes out(out_len);
    std::size_t len = out_len;
    if (EVP_PKEY_derive_init(ctx.get()) <= 0 ||
        EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()) <= 0 ||
        EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ikm.data(), static_cast<int>(ikm.size())) <= 0 ||
        EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), info.data(), static_cast<int>(info.size())) <= 0 ||
        EVP_PKEY_derive(ctx.get(), out.data(), &len) <= 0 || len != out_len) {
        throw CryptoError("HKDF-SHA256 derive failed");
    }
    return out;
}

Bytes aes256_cbc_encrypt(ByteView key, const Iv& iv, ByteView plaintext) {
    check_key(key);
    CipherCtx ctx = new_cipher_ctx();
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.data(), iv.data()) != 1) {
        throw CryptoError("AES-256-CBC encrypt init failed");
    }
    Bytes out(plaintext.size() + kCbcBlockBytes);
    int n1 = 0, n2 = 0;
    if (EVP_EncryptUpdate(ctx.get(), out.data(), &n1, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1 ||
        EVP_EncryptFinal_ex(ctx.get(), out.data() + n1, &n2) != 1) {
        throw CryptoError("AES-256-CBC encrypt failed");
    }
    out.resize(static_cast<std::size_t>(n1) + static_cast<std::size_t>(n2));
    return out;
}

Bytes aes256_cbc_decrypt(ByteView key, const Iv& iv, ByteView ciphertext) {
    check_key(key);
    if (ciphertext.empty() || ciphertext.size() % kCbcBlockBytes != 0) {
        throw IntegrityError("CBC ciphertext length not a positive multiple of 16");
    }
    CipherCtx ctx = new_cipher_ctx();
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.data(), iv.data()) != 1) {
        throw CryptoError("AES-256-CBC decrypt init failed");
    }
    Bytes out(ciphertext.size());
    int n1 = 0, n2 = 0;
    if (EVP_DecryptUpdate(ctx.get(), out.data(), &n1, ciphertext.data(),
                          static_cast<int>(ciphertext.size())) != 1 ||
        EVP_DecryptFinal_ex(ctx.get(), out.data() + n1, &n2) != 1) {
        throw IntegrityError("CBC padding check failed");
    }
    out.resize(static_cast<std::size_t>(n1) + static_cast<std::size_t>(n2));
    return out;
}

Bytes aes256_gcm_seal(ByteView key, ByteView nonce, ByteView plaintext) {
    check_key(key);
    if (nonce.size() != kGcmNonceBytes) throw ValidationError("GCM nonce must be 12 bytes");
    CipherCtx ctx = new_cipher_ctx();
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
        throw CryptoError("AES-256-GCM encrypt init failed");
    }
    Bytes out(plaintext.size() + kGcmTagBytes);
    int n1 = 0, n2 = 0;
    if (EVP_EncryptUpdate(ctx.get(), out.data(), &n1, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1 ||
        EVP_EncryptFinal_ex(ctx.get(), out.data() + n1, &n2) != 1) {
        throw CryptoError("AES-256-GCM encrypt failed");
    }
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagBytes,
                            out.data() + n1 + n2) != 1) {
        throw CryptoError("AES-256-GCM tag extraction failed");
    }
    out.resize(static_cast<std::size_t>(n1 + n2) + kGcmTagBytes);
    return out;
}

std::optional<Bytes> aes256_gcm_open(ByteView key, ByteView nonce, ByteView sealed) {
    check_key(key);
    if (nonce.size() != kGcmNonceBytes) throw ValidationError("GCM nonce must be 12 bytes");
    if (sealed.size() < kGcmTagBytes) return std::nullopt;
    std::size_t ct_len = sealed.size() - kGcmTagBytes;

    CipherCtx ctx = new_cipher_ctx();
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
        throw CryptoError("AES-256-GCM decrypt init failed");
    }
    Bytes out(ct_len);
    int n1 = 0, n2 = 0;
    Bytes tag(sealed.end() - kGcmTagBytes, sealed.end());
    if (EVP_DecryptUpdate(ctx.get(), out.data(), &n1, sealed.data(),
                          static_cast<int>(ct_len)) != 1) {
        throw CryptoError("AES-256-GCM decrypt failed");
    }
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagBytes, tag.data()) != 1) {
        throw CryptoError("AES-256-GCM tag set failed");
    }
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + n1, &n2) != 1) {
        return std::nullopt;  // tag mismatch
    }
    out.resize(static_cast<std::size_t>(n1) + static_cast<std::size_t>(n2));
    return out;
}

X25519KeyPair x25519_generate() {
    PkeyCtx ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_X25519, nullptr));
    if (!ctx || EVP_PKEY_keygen_init(ctx.get()) <= 0) {
        throw CryptoError("X25519 keygen init failed");
    }
    EVP_PKEY* raw = nullptr;
    if (EVP_PKEY_keygen(ctx.get(), &raw) <= 0) {
        throw CryptoError("X25519 keygen failed");
    }
    Pkey pkey(raw);
    X25519KeyPair kp;
    std::size_t len = kX25519Bytes;
    if (EVP_PKEY_get_raw_public_key(pkey.get(), kp.public_key.data(), &len) <= 0 ||
        len != kX25519Bytes) {
        throw CryptoError("X25519 public key export failed");
    }
    len = kX25519Bytes;
    if (EVP_PKEY_get_raw_private_key(pkey.get(), kp.secret_key.data(), &len) <= 0 ||
        len != kX25519Bytes) {
        throw CryptoError("X25519 secret key export failed");
    }
    return kp;
}

std::array<std::uint8_t, kX25519Bytes> x25519_public_from_secret(ByteView secret_key) {
    if (secret_key.size() != kX25519Bytes) {
        throw ValidationError("X25519 secret key must be 32 bytes");
    }
    Pkey sk(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, secret_key.data(),
                                         secret_key.size()));
    if (!sk) throw CryptoError("X25519 secret key import failed");
    std::array<std::uint8_t, kX25519Bytes> out{};
    std::size_t len = kX25519Bytes;
    if (EVP_PKEY_get_raw_public_key(sk.get(), out.data(), &len) <= 0 || len != kX25519Bytes) {
        throw CryptoError("X25519 public key derivation failed");
    }
    return out;
}

std::array<std::uint8_t, kX25519Bytes> x25519_shared(ByteView secret_key,
                                                     ByteView peer_public_key) {
    if (secret_key.size() != kX25519Bytes || peer_public_key.size() != kX25519Bytes) {
        throw ValidationError("X25519 keys must be 32 bytes");
    }
    Pkey sk(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, secret_key.data(),
                                         secret_key.size()));
    Pkey pk(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr, peer_public_key.data(),
                                        peer_public_key.size()));
    if (!sk || !pk) throw CryptoError("X25519 key import failed");
    PkeyCtx ctx(EVP_PKEY_CTX_new(sk.get(), nullptr));
    std::array<std::uint8_t, kX25519Bytes> out{};
    std::size_t len = kX25519Bytes;
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) <= 0 ||
        EVP_PKEY_derive_set_peer(ctx.get(), pk.get()) <= 0 ||
        EVP_PKEY_derive(ctx.get(), out.data(), &len) <= 0 || len != kX25519Bytes) {
        throw CryptoError("X25519 shared secret derivation failed");
    }
    return out;
}

}  // namespace pixlock::crypto
