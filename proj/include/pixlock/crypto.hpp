#pragma once

#include <array>
#include <optional>

#include "pixlock/bytes.hpp"

namespace pixlock::crypto {

constexpr std::size_t kSymKeyBytes = 32;   // 256-bit symmetric keys
constexpr std::size_t kCbcIvBytes = 16;
constexpr std::size_t kCbcBlockBytes = 16;
constexpr std::size_t kMacBytes = 32;      // HMAC-SHA256
constexpr std::size_t kGcmNonceBytes = 12;
constexpr std::size_t kGcmTagBytes = 16;
constexpr std::size_t kX25519Bytes = 32;

using Key256 = std::array<std::uint8_t, kSymKeyBytes>;
using Iv = std::array<std::uint8_t, kCbcIvBytes>;
using Digest = std::array<std::uint8_t, 32>;

Bytes random_bytes(std::size_t n);

Digest sha256(ByteView data);

Bytes hmac_sha256(ByteView key, ByteView data);

/// HKDF-SHA256 with empty salt; `info` is the derivation label.
Bytes hkdf_sha256(ByteView ikm, ByteView info, std::size_t out_len);

/// AES-256-CBC with PKCS#7 padding. Output length is always
/// (len / 16 + 1) * 16.
Bytes aes256_cbc_encrypt(ByteView key, const Iv& iv, ByteView plaintext);
Bytes aes256_cbc_decrypt(ByteView key, const Iv& iv, ByteView ciphertext);

/// AES-256-GCM; returns ciphertext || 16-byte tag.
Bytes aes256_gcm_seal(ByteView key, ByteView nonce, ByteView plaintext);
/// Returns nullopt if the tag does not verify.
std::optional<Bytes> aes256_gcm_open(ByteView key, ByteView nonce, ByteView sealed);

struct X25519KeyPair {
    std::array<std::uint8_t, kX25519Bytes> public_key;
    std::array<std::uint8_t, kX25519Bytes> secret_key;
};

X25519KeyPair x25519_generate();
std::array<std::uint8_t, kX25519Bytes> x25519_shared(
    ByteView secret_key, ByteView peer_public_key);
std::array<std::uint8_t, kX25519Bytes> x25519_public_from_secret(ByteView secret_key);

}  // namespace pixlock::crypto
