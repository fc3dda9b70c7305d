#include "pixlock/metadata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace pixlock {

using ordered_json = nlohmann::ordered_json;

void SensitivityGroupTable::validate() const {
    if (thresholds.empty()) {
        throw ParseError("group_table.thresholds: must contain at least one value");
    }
    if (!(alpha < beta)) {
        throw ParseError("group_table: alpha must be below beta");
    }
    double prev = alpha;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > prev)) {
            throw ParseError("group_table.thresholds[" + std::to_string(i) +
                             "]: thresholds must be strictly ascending and above alpha");
        }
        prev = thresholds[i];
    }
    if (thresholds.back() != beta) {
        throw ParseError("group_table.thresholds: final threshold must equal beta");
    }
}

double normalize_score(double mean_rating) {
    if (!(mean_rating >= 1.0 && mean_rating <= 5.0)) {
        throw ValidationError("mean rating " + std::to_string(mean_rating) +
                              " outside [1, 5]");
    }
    return 0.1 + 0.9 * (mean_rating - 1.0) / 4.0;
}

int assign_group(double score, const SensitivityGroupTable& table) {
    table.validate();
    if (!(score >= table.alpha && score <= table.beta)) {
        throw ValidationError("score " + std::to_string(score) + " outside [" +
                              std::to_string(table.alpha) + ", " +
                              std::to_string(table.beta) + "]");
    }
    for (std::size_t i = 0; i < table.thresholds.size(); ++i) {
        if (score <= table.thresholds[i]) return static_cast<int>(i) + 1;
    }
    // Unreachable: score <= beta == thresholds.back().
    return table.group_count();
}

std::string to_string(Modality m) {
    switch (m) {
        case Modality::visual: return "visual";
        case Modality::textual: return "textual";
        case Modality::multimodal: return "multimodal";
    }
    throw ValidationError("unknown modality value");
}

Modality modality_from_string(const std::string& s) {
    if (s == "visual") return Modality::visual;
    if (s == "textual") return Modality::textual;
    if (s == "multimodal") return Modality::multimodal;
    throw ParseError("modality: unknown value '" + s + "'");
}

std::vector<std::uint64_t> mask_to_rle(const std::vector<bool>& mask) {
    std::vector<std::uint64_t> rle;
    bool current = false;  // runs start with a zero-run
    std::uint64_t run = 0;
    for (bool bit : mask) {
        if (bit == current) {
            ++run;
        } else {
            rle.push_back(run);
            current = bit;
            run = 1;
        }
    }
    rle.push_back(run);
    return rle;
}

std::vector<bool> rle_to_mask(const std::vector<std::uint64_t>& rle,
                              std::size_t expected_pixels) {
    std::vector<bool> mask;
    mask.reserve(expected_pixels);
    bool current = false;
    for (std::uint64_t run : rle) {
        for (std::uint64_t i = 0; i < run; ++i) mask.push_back(current);
        current = !current;
    }
    if (mask.size() != expected_pixels) {
        throw ParseError("mask_rle: run lengths sum to " + std::to_string(mask.size()) +
                         ", expected " + std::to_string(expected_pixels));
    }
    return mask;
}

std::uint64_t rle_set_pixel_count(const std::vector<std::uint64_t>& rle) {
    std::uint64_t count = 0;
    for (std::size_t i = 1; i < rle.size(); i += 2) count += rle[i];
    return count;
}

std::string format_score(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

namespace {

std::uint64_t rle_total(const std::vector<std::uint64_t>& rle) {
    std::uint64_t total = 0;
    for (std::uint64_t run : rle) total += run;
    return total;
}

void validate_annotation(const PsoAnnotation& a, const ImageMetadata& meta) {
    const std::string where = "annotations[" + std::to_string(a.id) + "]";
    if (a.label.empty()) {
        throw ParseError(where + ".label: must be non-empty");
    }
    if (!(a.confidence >= 0.0 && a.confidence <= 1.0)) {
        throw ParseError(where + ".confidence: outside [0, 1]");
    }
    const auto& table = meta.group_table;
    if (!(a.sensitivity_score >= table.alpha && a.sensitivity_score <= table.beta)) {
        throw ParseError(where + ".sensitivity_score: outside [alpha, beta]");
    }
    int expected = assign_group(a.sensitivity_score, table);
    if (a.group != expected) {
        throw ParseError(where + ".group: claims group " + std::to_string(a.group) +
                         " but score " + format_score(a.sensitivity_score) +
                         " maps to group " + std::to_string(expected));
    }
    switch (a.geometry.kind) {
        case RegionGeometry::Kind::bbox: {
            if (a.modality == Modality::visual) {
                throw ParseError(where + ".geometry: visual annotations require mask geometry");
            }
            const BBox& b = a.geometry.bbox;
            if (b.width < 1 || b.height < 1) {
                throw ParseError(where + ".geometry.bbox: width and height must be >= 1");
            }
            if (b.x < 0 || b.y < 0 || b.x + b.width > meta.width ||
                b.y + b.height > meta.height) {
                throw ParseError(where + ".geometry.bbox: outside image bounds");
            }
            break;
        }
        case RegionGeometry::Kind::mask: {
            if (a.modality != Modality::visual) {
                throw ParseError(where +
                                 ".geometry: textual/multimodal annotations require bbox geometry");
            }
            std::uint64_t total = rle_total(a.geometry.mask_rle);
            std::uint64_t plane =
                static_cast<std::uint64_t>(meta.width) * static_cast<std::uint64_t>(meta.height);
            if (total != plane) {
                throw ParseError(where + ".geometry.mask_rle: covers " + std::to_string(total) +
                                 " pixels, image plane has " + std::to_string(plane));
            }
            if (rle_set_pixel_count(a.geometry.mask_rle) == 0) {
                throw ParseError(where + ".geometry.mask_rle: mask has no set pixel");
            }
            break;
        }
    }
}

}  // namespace

void ImageMetadata::validate() const {
    if (schema_version != 1) {
        throw ParseError("schema_version: unsupported version " + std::to_string(schema_version));
    }
    if (image_id.empty()) {
        throw ParseError("image_id: must be non-empty");
    }
    if (width < 1 || height < 1) {
        throw ParseError("width/height: must be >= 1");
    }
    if (channels != 1 && channels != 3 && channels != 4) {
        throw ParseError("channels: must be one of {1, 3, 4}");
    }
    group_table.validate();
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        if (annotations[i].id != static_cast<int>(i)) {
            throw ParseError("annotations[" + std::to_string(i) +
                             "].id: ids must be unique and dense from 0");
        }
        validate_annotation(annotations[i], *this);
    }
}

namespace {

double parse_score_field(const ordered_json& v, const std::string& where) {
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        try {
            std::size_t pos = 0;
            double d = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return d;
        } catch (const std::exception&) {
            throw ParseError(where + ": not a decimal number: '" + s + "'");
        }
    }
    if (v.is_number()) return v.get<double>();
    throw ParseError(where + ": expected number or decimal string");
}

const ordered_json& field(const ordered_json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return *it;
}

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = std::any_of(known.begin(), known.end(),
                              [&](const char* k) { return it.key() == k; });
        if (!ok) throw ParseError(where + ": unknown field '" + it.key() + "'");
    }
}

int parse_int(const ordered_json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ParseError(where + ": expected integer");
    return v.get<int>();
}

RegionGeometry parse_geometry(const ordered_json& g, const std::string& where) {
    if (!g.is_object()) throw ParseError(where + ": expected object");
    RegionGeometry geom;
    std::string kind = field(g, "kind", where).get<std::string>();
    if (kind == "bbox") {
        reject_unknown_keys(g, {"kind", "bbox"}, where);
        geom.kind = RegionGeometry::Kind::bbox;
        const ordered_json& b = field(g, "bbox", where);
        if (!b.is_array() || b.size() != 4) {
            throw ParseError(where + ".bbox: expected [x, y, width, height]");
        }
        geom.bbox = {parse_int(b[0], where + ".bbox[0]"), parse_int(b[1], where + ".bbox[1]"),
                     parse_int(b[2], where + ".bbox[2]"), parse_int(b[3], where + ".bbox[3]")};
    } else if (kind == "mask") {
        reject_unknown_keys(g, {"kind", "mask_rle"}, where);
        geom.kind = RegionGeometry::Kind::mask;
        const ordered_json& runs = field(g, "mask_rle", where);
        if (!runs.is_array()) throw ParseError(where + ".mask_rle: expected array");
        for (const auto& r : runs) {
            if (!r.is_number_unsigned() && !(r.is_number_integer() && r.get<std::int64_t>() >= 0)) {
                throw ParseError(where + ".mask_rle: runs must be non-negative integers");
            }
            geom.mask_rle.push_back(r.get<std::uint64_t>());
        }
    } else {
        throw ParseError(where + ".kind: unknown kind '" + kind + "'");
    }
    return geom;
}

ordered_json geometry_to_json(const RegionGeometry& geom) {
    ordered_json g;
    if (geom.kind == RegionGeometry::Kind::bbox) {
        g["kind"] = "bbox";
        g["bbox"] = {geom.bbox.x, geom.bbox.y, geom.bbox.width, geom.bbox.height};
    } else {
        g["kind"] = "mask";
        g["mask_rle"] = geom.mask_rle;
    }
    return g;
}

}  // namespace

ImageMetadata parse_metadata(std::string_view json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("metadata is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("metadata: expected a JSON object");
    reject_unknown_keys(doc,
                        {"schema_version", "image_id", "width", "height", "channels",
                         "group_table", "annotations"},
                        "metadata");

    ImageMetadata meta;
    meta.schema_version = parse_int(field(doc, "schema_version", "metadata"), "schema_version");
    meta.image_id = field(doc, "image_id", "metadata").get<std::string>();
    meta.width = parse_int(field(doc, "width", "metadata"), "width");
    meta.height = parse_int(field(doc, "height", "metadata"), "height");
    meta.channels = parse_int(field(doc, "channels", "metadata"), "channels");

    const ordered_json& gt = field(doc, "group_table", "metadata");
    reject_unknown_keys(gt, {"alpha", "beta", "thresholds"}, "group_table");
    meta.group_table.alpha = parse_score_field(field(gt, "alpha", "group_table"), "group_table.alpha");
    meta.group_table.beta = parse_score_field(field(gt, "beta", "group_table"), "group_table.beta");
    const ordered_json& th = field(gt, "thresholds", "group_table");
    if (!th.is_array()) throw ParseError("group_table.thresholds: expected array");
    for (std::size_t i = 0; i < th.size(); ++i) {
        meta.group_table.thresholds.push_back(
            parse_score_field(th[i], "group_table.thresholds[" + std::to_string(i) + "]"));
    }

    const ordered_json& anns = field(doc, "annotations", "metadata");
    if (!anns.is_array()) throw ParseError("annotations: expected array");
    for (std::size_t i = 0; i < anns.size(); ++i) {
        const std::string where = "annotations[" + std::to_string(i) + "]";
        const ordered_json& a = anns[i];
        if (!a.is_object()) throw ParseError(where + ": expected object");
        reject_unknown_keys(a,
                            {"id", "label", "modality", "geometry", "confidence",
                             "sensitivity_score", "group"},
                            where);
        PsoAnnotation ann;
        ann.id = parse_int(field(a, "id", where), where + ".id");
        ann.label = field(a, "label", where).get<std::string>();
        ann.modality = modality_from_string(field(a, "modality", where).get<std::string>());
        ann.geometry = parse_geometry(field(a, "geometry", where), where + ".geometry");
        ann.confidence = parse_score_field(field(a, "confidence", where), where + ".confidence");
        ann.sensitivity_score = parse_score_field(field(a, "sensitivity_score", where),
                                                  where + ".sensitivity_score");
        ann.group = parse_int(field(a, "group", where), where + ".group");
        meta.annotations.push_back(std::move(ann));
    }

    meta.validate();
    return meta;
}

std::string serialize_metadata(const ImageMetadata& meta) {
    meta.validate();
    ordered_json doc;
    doc["schema_version"] = meta.schema_version;
    doc["image_id"] = meta.image_id;
    doc["width"] = meta.width;
    doc["height"] = meta.height;
    doc["channels"] = meta.channels;
    ordered_json gt;
    gt["alpha"] = format_score(meta.group_table.alpha);
    gt["beta"] = format_score(meta.group_table.beta);
    ordered_json th = ordered_json::array();
    for (double t : meta.group_table.thresholds) th.push_back(format_score(t));
    gt["thresholds"] = th;
    doc["group_table"] = gt;

    ordered_json anns = ordered_json::array();
    for (const PsoAnnotation& a : meta.annotations) {
        ordered_json j;
        j["id"] = a.id;
        j["label"] = a.label;
        j["modality"] = to_string(a.modality);
        j["geometry"] = geometry_to_json(a.geometry);
        j["confidence"] = format_score(a.confidence);
        j["sensitivity_score"] = format_score(a.sensitivity_score);
        j["group"] = a.group;
        anns.push_back(std::move(j));
    }
    doc["annotations"] = anns;
    return doc.dump();
}

}  // namespace pixlock
