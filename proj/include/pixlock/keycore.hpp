#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pixlock/bytes.hpp"
#include "pixlock/crypto.hpp"

namespace pixlock {

constexpr std::size_t kGroupKeyBytes = crypto::kSymKeyBytes;

/// Key material for sensitivity group `group`: the group's own key
/// followed by every lower group's key, K_g || K_{g-1} || ... || K_1.
/// Holding the chain for group g therefore grants every key j <= g.
struct GroupKeyChain {
    int group = 0;
    Bytes chain;  // 32 * group bytes

    bool operator==(const GroupKeyChain&) const = default;
};

/// Fresh 256-bit symmetric key from the system RNG.
Bytes random_key();

/// Generates L fresh base keys and assembles the chain for every group
/// 1..levels. All chains share the same base keys, so chain(j) is a
/// suffix of chain(g) whenever j <= g.
std::vector<GroupKeyChain> build_group_chains(int levels);

/// Extracts K_j from a group chain; j must be in [1, chain.group].
std::array<std::uint8_t, kGroupKeyBytes> chain_segment(const GroupKeyChain& chain, int j);

/// Monotone disjunction of attributes gating one group key: any single
/// listed attribute suffices to unwrap.
struct AccessPolicy {
    int group = 0;
    std::set<std::string> attributes;

    bool operator==(const AccessPolicy&) const = default;
};

/// P_g = { attribute : max_group(attribute) >= g }. Policies nest:
/// attributes(P_g) is a superset of attributes(P_{g+1}). Throws
/// ConfigError if some group would end up undecryptable.
std::vector<AccessPolicy> build_policies(const std::map<std::string, int>& attribute_max_group,
                                         int levels);

using PublicKeyMap = std::map<std::string, std::array<std::uint8_t, crypto::kX25519Bytes>>;
using SecretKeyMap = std::map<std::string, std::array<std::uint8_t, crypto::kX25519Bytes>>;

/// Per-attribute asymmetric keypairs. The public half (mpk) wraps group
/// keys; the secret half (msk) stays inside the key service.
struct AttributeKeyring {
    PublicKeyMap mpk;
    SecretKeyMap msk;
};

AttributeKeyring keyring_generate(const std::set<std::string>& attribute_universe);

/// A user's decryption key: msk restricted to the user's attributes.
struct UserKey {
    std::string user_id;
    SecretKeyMap attributes;
};

UserKey derive_user_key(const SecretKeyMap& msk, const std::string& user_id,
                        const std::set<std::string>& attributes);

/// One policy-wrapped group key chain: an independent authenticated
/// wrap of the same chain under each policy attribute's public key.
struct WrappedGroupKey {
    int group = 0;
    AccessPolicy policy;
    std::map<std::string, Bytes> shares;  // attribute -> sealed chain

    bool operator==(const WrappedGroupKey&) const = default;
};

WrappedGroupKey wrap_group_key(const PublicKeyMap& mpk, const AccessPolicy& policy,
                               ByteView chain);

/// Unwraps if the user holds at least one policy attribute; returns
/// nullopt (denial) otherwise. A share that fails authentication under
/// a matching attribute raises IntegrityError instead of a denial.
std::optional<Bytes> unwrap_group_key(const UserKey& user_key, const WrappedGroupKey& wrapped);

/// The published key material: exactly `levels` wrapped records plus the
/// attribute universe and public wrapping keys.
struct WrappedKeyStore {
    int levels = 0;
    PublicKeyMap mpk;
    std::vector<WrappedGroupKey> wrapped;  // groups 1..levels, ascending

    void validate() const;
};

struct KeyRecovery {
    int group = 0;       // highest group the user could unwrap
    GroupKeyChain chain;
};

/// Scans wrapped keys from the most sensitive group downwards and stops
/// at the first successful unwrap; the chain then yields every lower
/// key by segmentation, so one policy decryption covers the session.
std::optional<KeyRecovery> recover_max_group(const UserKey& user_key,
                                             const WrappedKeyStore& store);

/// Instrumentation for the wrap/unwrap call counts (thread-local).
struct KemCounters {
    std::uint64_t wrap_calls = 0;
    std::uint64_t unwrap_attempts = 0;
    std::uint64_t unwrap_successes = 0;

    void reset() { *this = {}; }
};

KemCounters& kem_counters();

}  // namespace pixlock
