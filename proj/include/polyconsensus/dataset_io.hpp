#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyconsensus/consensus.hpp"

namespace polyconsensus {

// Multi-rater JSON schema (exact field names):
// {"sample_id": str, "image": {"width": int, "height": int},
//  "raters": [{"rater_id": str, "phase": "pre_qa"|"post_qa",
//              "polygon": [[x, y], ...]}]}
// plus an optional free-text "instructions" field. (rater_id, phase) pairs
// are unique; coordinates are crop-local pixels.
RaterSet rater_set_from_json(const nlohmann::json& doc);
nlohmann::json rater_set_to_json(const RaterSet& set);

RaterSet load_multirater(const std::filesystem::path& path);
void save_multirater(const RaterSet& set, const std::filesystem::path& path);

struct CocoInstance {
    Polygon polygon;
    BBox bbox;
    double image_width = 0.0;
    double image_height = 0.0;
};

// First (and only) segmentation ring of a polygon-typed COCO annotation.
// RLE or multi-ring segmentations are unsupported.
CocoInstance load_coco_polygon(const std::filesystem::path& coco_json_path,
                               std::int64_t image_id, std::int64_t annotation_id);

struct PreparedSample {
    Polygon polygon; // crop-local coordinates
    BBox crop;
};

// Bbox expanded by `margin` and clamped to the image; the polygon is
// translated into crop-local coordinates.
PreparedSample prepare_sample(const Polygon& polygon, const BBox& bbox,
                              double image_w, double image_h,
                              double margin = 0.10);

struct CocoIdRecord {
    int image_id = 0; // local id, 1..24
    std::int64_t coco_image_id = 0;
    std::int64_t coco_annotation_id = 0;
};

// The 24 study samples' original COCO image/annotation ids.
const std::vector<CocoIdRecord>& bundled_coco_ids();

// CSV with header image_id,coco_image_id,coco_annotation_id.
void write_coco_ids_csv(const std::filesystem::path& path);

} // namespace polyconsensus
