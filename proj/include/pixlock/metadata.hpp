#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pixlock/errors.hpp"

namespace pixlock {

/// Partition of the sensitivity scale [alpha, beta] into ordered groups.
/// Group intervals are lower-exclusive / upper-inclusive, except group 1
/// which also contains alpha. Group indices are 1-based.
struct SensitivityGroupTable {
    double alpha = 0.1;
    double beta = 1.0;
    std::vector<double> thresholds;  // strictly ascending, last == beta

    int group_count() const { return static_cast<int>(thresholds.size()); }
    void validate() const;

    bool operator==(const SensitivityGroupTable&) const = default;
};

/// Maps a mean user rating in [1, 5] onto the sensitivity scale [0.1, 1.0].
double normalize_score(double mean_rating);

/// Smallest group index whose threshold is >= score.
int assign_group(double score, const SensitivityGroupTable& table);

enum class Modality { visual, textual, multimodal };

std::string to_string(Modality m);
Modality modality_from_string(const std::string& s);

struct BBox {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool operator==(const BBox&) const = default;
};

struct RegionGeometry {
    enum class Kind { bbox, mask };

    Kind kind = Kind::bbox;
    BBox bbox;                            // valid when kind == bbox
    std::vector<std::uint64_t> mask_rle;  // valid when kind == mask

    bool operator==(const RegionGeometry&) const = default;
};

/// Run-length encoding of a row-major boolean raster: alternating
/// zero-run / one-run lengths, starting with the zero-run (which may be 0).
std::vector<std::uint64_t> mask_to_rle(const std::vector<bool>& mask);
std::vector<bool> rle_to_mask(const std::vector<std::uint64_t>& rle,
                              std::size_t expected_pixels);
std::uint64_t rle_set_pixel_count(const std::vector<std::uint64_t>& rle);

/// One detected privacy-sensitive object.
struct PsoAnnotation {
    int id = 0;
    std::string label;
    Modality modality = Modality::visual;
    RegionGeometry geometry;
    double confidence = 0.0;
    double sensitivity_score = 0.0;
    int group = 0;

    bool operator==(const PsoAnnotation&) const = default;
};

struct ImageMetadata {
    int schema_version = 1;
    std::string image_id;
    int width = 0;
    int height = 0;
    int channels = 0;
    SensitivityGroupTable group_table;
    std::vector<PsoAnnotation> annotations;

    /// Checks every structural invariant; throws ParseError naming the
    /// offending field/annotation.
    void validate() const;

    bool operator==(const ImageMetadata&) const = default;
};

/// Canonical real-number formatting used throughout the metadata schema:
/// decimal string with exactly four fractional digits.
std::string format_score(double value);

ImageMetadata parse_metadata(std::string_view json_text);
std::string serialize_metadata(const ImageMetadata& meta);

}  // namespace pixlock
