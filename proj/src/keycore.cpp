#include "pixlock/keycore.hpp"

#include <algorithm>

namespace pixlock {

namespace {

// Derivation label binding the KEM key to both sides of the exchange.
constexpr std::string_view kKemLabel = "pixlock attribute-kem v1";

Bytes kem_info(ByteView ephemeral_pub, ByteView recipient_pub) {
    Bytes info(kKemLabel.begin(), kKemLabel.end());
    info.insert(info.end(), ephemeral_pub.begin(), ephemeral_pub.end());
    info.insert(info.end(), recipient_pub.begin(), recipient_pub.end());
    return info;
}

}  // namespace

KemCounters& kem_counters() {
    thread_local KemCounters counters;
    return counters;
}

Bytes random_key() {
    return crypto::random_bytes(kGroupKeyBytes);
}

std::vector<GroupKeyChain> build_group_chains(int levels) {
    if (levels < 1) {
        throw ValidationError("group count must be >= 1, got " + std::to_string(levels));
    }
    std::vector<Bytes> base_keys;
    base_keys.reserve(levels);
    for (int i = 0; i < levels; ++i) base_keys.push_back(random_key());

    std::vector<GroupKeyChain> chains;
    chains.reserve(levels);
    for (int g = 1; g <= levels; ++g) {
        GroupKeyChain c;
        c.group = g;
        c.chain.reserve(static_cast<std::size_t>(g) * kGroupKeyBytes);
        for (int j = g; j >= 1; --j) {
            const Bytes& k = base_keys[j - 1];
            c.chain.insert(c.chain.end(), k.begin(), k.end());
        }
        chains.push_back(std::move(c));
    }
    return chains;
}

std::array<std::uint8_t, kGroupKeyBytes> chain_segment(const GroupKeyChain& chain, int j) {
    if (chain.group < 1 ||
        chain.chain.size() != static_cast<std::size_t>(chain.group) * kGroupKeyBytes) {
        throw ValidationError("malformed group key chain");
    }
    if (j < 1 || j > chain.group) {
        throw ValidationError("segment " + std::to_string(j) + " outside [1, " +
                              std::to_string(chain.group) + "]");
    }
    std::array<std::uint8_t, kGroupKeyBytes> out;
    std::size_t off = static_cast<std::size_t>(chain.group - j) * kGroupKeyBytes;
    std::copy_n(chain.chain.begin() + off, kGroupKeyBytes, out.begin());
    return out;
}

std::vector<AccessPolicy> build_policies(const std::map<std::string, int>& attribute_max_group,
                                         int levels) {
    if (levels < 1) {
        throw ValidationError("group count must be >= 1");
    }
    for (const auto& [attr, max_group] : attribute_max_group) {
        if (max_group < 1 || max_group > levels) {
            throw ValidationError("attribute '" + attr + "' maps to group " +
                                  std::to_string(max_group) + " outside [1, " +
                                  std::to_string(levels) + "]");
        }
    }
    std::vector<AccessPolicy> policies;
    for (int g = 1; g <= levels; ++g) {
        AccessPolicy p;
        p.group = g;
        for (const auto& [attr, max_group] : attribute_max_group) {
            if (max_group >= g) p.attributes.insert(attr);
        }
        if (p.attributes.empty()) {
            throw ConfigError("policy for group " + std::to_string(g) +
                              " is empty: no attribute could ever decrypt it");
        }
        policies.push_back(std::move(p));
    }
    return policies;
}

AttributeKeyring keyring_generate(const std::set<std::string>& attribute_universe) {
    if (attribute_universe.empty()) {
        throw ValidationError("attribute universe must be non-empty");
    }
    AttributeKeyring ring;
    for (const std::string& attr : attribute_universe) {
        crypto::X25519KeyPair kp = crypto::x25519_generate();
        ring.mpk[attr] = kp.public_key;
        ring.msk[attr] = kp.secret_key;
    }
    return ring;
}

UserKey derive_user_key(const SecretKeyMap& msk, const std::string& user_id,
                        const std::set<std::string>& attributes) {
    UserKey key;
    key.user_id = user_id;
    for (const std::string& attr : attributes) {
        auto it = msk.find(attr);
        if (it == msk.end()) {
            throw ValidationError("unknown attribute '" + attr + "'");
        }
        key.attributes[attr] = it->second;
    }
    return key;
}

WrappedGroupKey wrap_group_key(const PublicKeyMap& mpk, const AccessPolicy& policy,
                               ByteView chain) {
    if (policy.attributes.empty()) {
        throw ValidationError("policy has no attributes");
    }
    WrappedGroupKey out;
    out.group = policy.group;
    out.policy = policy;
    for (const std::string& attr : policy.attributes) {
        auto it = mpk.find(attr);
        if (it == mpk.end()) {
            throw ValidationError("policy attribute '" + attr + "' outside the key universe");
        }
        crypto::X25519KeyPair eph = crypto::x25519_generate();
        auto shared = crypto::x25519_shared(eph.secret_key, it->second);
        Bytes kek = crypto::hkdf_sha256(shared, kem_info(eph.public_key, it->second),
                                        crypto::kSymKeyBytes);
        Bytes nonce = crypto::random_bytes(crypto::kGcmNonceBytes);
        Bytes sealed = crypto::aes256_gcm_seal(kek, nonce, chain);

        // share = ephemeral_pub(32) || nonce(12) || ciphertext || tag(16)
        Bytes share;
        share.reserve(crypto::kX25519Bytes + nonce.size() + sealed.size());
        share.insert(share.end(), eph.public_key.begin(), eph.public_key.end());
        share.insert(share.end(), nonce.begin(), nonce.end());
        share.insert(share.end(), sealed.begin(), sealed.end());
        out.shares[attr] = std::move(share);
    }
    ++kem_counters().wrap_calls;
    return out;
}

std::optional<Bytes> unwrap_group_key(const UserKey& user_key, const WrappedGroupKey& wrapped) {
    ++kem_counters().unwrap_attempts;
    for (const auto& [attr, secret] : user_key.attributes) {
        auto it = wrapped.shares.find(attr);
        if (it == wrapped.shares.end()) continue;
        const Bytes& share = it->second;
        constexpr std::size_t kHeader = crypto::kX25519Bytes + crypto::kGcmNonceBytes;
        if (share.size() < kHeader + crypto::kGcmTagBytes) {
            throw IntegrityError("wrapped key share for '" + attr + "' is truncated");
        }
        ByteView eph_pub(share.data(), crypto::kX25519Bytes);
        ByteView nonce(share.data() + crypto::kX25519Bytes, crypto::kGcmNonceBytes);
        ByteView sealed(share.data() + kHeader, share.size() - kHeader);

        auto shared = crypto::x25519_shared(secret, eph_pub);
        // The derivation label binds the recipient public key, which the
        // holder recomputes from the secret half.
        auto recipient_pub = crypto::x25519_public_from_secret(secret);
        Bytes kek = crypto::hkdf_sha256(shared, kem_info(eph_pub, recipient_pub),
                                        crypto::kSymKeyBytes);
        auto opened = crypto::aes256_gcm_open(kek, nonce, sealed);
        if (!opened) {
            throw IntegrityError("wrapped key for group " + std::to_string(wrapped.group) +
                                 " failed authentication under attribute '" + attr + "'");
        }
        ++kem_counters().unwrap_successes;
        return opened;
    }
    return std::nullopt;  // denial: no policy attribute held
}

std::optional<KeyRecovery> recover_max_group(const UserKey& user_key,
                                             const WrappedKeyStore& store) {
    store.validate();
    for (int g = store.levels; g >= 1; --g) {
        const WrappedGroupKey& wrapped = store.wrapped[g - 1];
        auto chain = unwrap_group_key(user_key, wrapped);
        if (chain) {
            if (chain->size() != static_cast<std::size_t>(g) * kGroupKeyBytes) {
                throw IntegrityError("recovered chain for group " + std::to_string(g) +
                                     " has wrong length");
            }
            return KeyRecovery{g, GroupKeyChain{g, std::move(*chain)}};
        }
    }
    return std::nullopt;
}

void WrappedKeyStore::validate() const {
    if (levels < 1) throw IntegrityError("key store has no groups");
    if (static_cast<int>(wrapped.size()) != levels) {
        throw IntegrityError("key store holds " + std::to_string(wrapped.size()) +
                             " wrapped records, expected " + std::to_string(levels));
    }
    for (int g = 1; g <= levels; ++g) {
        if (wrapped[g - 1].group != g) {
            throw IntegrityError("key store record " + std::to_string(g - 1) +
                                 " is not group " + std::to_string(g));
        }
        if (wrapped[g - 1].shares.empty()) {
            throw IntegrityError("key store record for group " + std::to_string(g) +
                                 " has no shares");
        }
    }
    // Nesting: higher groups gate subsets of lower groups' attributes.
    for (int g = 1; g < levels; ++g) {
        const auto& lower = wrapped[g - 1].policy.attributes;
        const auto& upper = wrapped[g].policy.attributes;
        if (!std::includes(lower.begin(), lower.end(), upper.begin(), upper.end())) {
            throw IntegrityError("policies do not nest between groups " + std::to_string(g) +
                                 " and " + std::to_string(g + 1));
        }
    }
}

}  // namespace pixlock
