#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "pixlock/crypto.hpp"
#include "pixlock/image.hpp"
#include "pixlock/keycore.hpp"
#include "pixlock/metadata.hpp"

namespace pixlock {

struct PixelCoord {
    std::uint32_t x = 0;
    std::uint32_t y = 0;

    bool operator==(const PixelCoord&) const = default;
};

/// All pixels covered by the annotation, sorted row-major.
std::vector<PixelCoord> rasterize_region(const PsoAnnotation& annotation, int width,
                                         int height);

/// Exclusive pixel assignment after overlap resolution. owned is indexed
/// by annotation id; owner maps each pixel (row-major index) to the id
/// that claimed it, or -1.
struct PixelOwnership {
    std::vector<std::vector<PixelCoord>> owned;
    std::vector<std::int32_t> owner;
};

/// Claims pixels in descending (group, sensitivity_score) order with ties
/// broken by ascending id, so every contested pixel belongs to the most
/// sensitive covering annotation and is encrypted exactly once. A fully
/// covered lower-sensitivity annotation ends up with an empty set.
PixelOwnership resolve_ownership(const std::vector<PsoAnnotation>& annotations, int width,
                                 int height);

struct EncryptedPso {
    int pso_id = 0;
    int group = 0;
    crypto::Iv iv{};
    Bytes ciphertext;
    std::array<std::uint8_t, crypto::kMacBytes> mac{};
    std::uint64_t pixel_count = 0;

    bool operator==(const EncryptedPso&) const = default;
};

/// Source of fresh CBC IVs; tests and golden-file generation inject a
/// deterministic one.
using IvSource = std::function<crypto::Iv()>;
IvSource default_iv_source();

/// Encrypts the owned pixels' bytes under the group key and overwrites
/// those pixels in `scrambled` with the leading ciphertext bytes. An
/// empty pixel set produces an empty blob and leaves the buffer alone.
EncryptedPso encrypt_region(ByteView group_key, const std::vector<PixelCoord>& pixels,
                            const Image& source, Image& scrambled, int pso_id, int group,
                            const IvSource& iv_source = default_iv_source());

/// Verifies the MAC, decrypts, and restores the owned pixels in place.
/// Throws IntegrityError on MAC mismatch (including wrong-key use).
void decrypt_region(ByteView group_key, const EncryptedPso& blob,
                    const std::vector<PixelCoord>& pixels, Image& target);

struct ProtectedImage {
    Image scrambled;
    std::vector<EncryptedPso> blobs;  // sorted by pso_id
    ImageMetadata metadata;
    PixelOwnership ownership;
};

/// Runs the full encryption flow: resolve ownership, then encrypt each
/// annotation's exclusive pixels with its group's key segment taken from
/// the top chain.
ProtectedImage protect_image(const Image& image, const ImageMetadata& metadata,
                             const GroupKeyChain& top_chain,
                             const IvSource& iv_source = default_iv_source());

/// Restores every blob with group <= recovery.group and leaves more
/// sensitive regions scrambled. Throws IntegrityError (naming the pso id)
/// if an authorized blob fails authentication.
Image unlock_image(const ProtectedImage& container, const KeyRecovery& recovery);

/// Recomputes ownership from the embedded metadata (used after loading a
/// container from disk).
PixelOwnership recompute_ownership(const ImageMetadata& metadata);

}  // namespace pixlock
