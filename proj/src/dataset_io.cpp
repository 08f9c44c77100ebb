#include "polyconsensus/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace polyconsensus {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& pointer, const std::string& what) {
    throw ParseError("at " + pointer + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& pointer) {
    if (!obj.is_object()) parse_fail(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) parse_fail(pointer + "/" + key, "missing field");
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& pointer) {
    const json& v = require(obj, key, pointer);
    if (!v.is_number()) parse_fail(pointer + "/" + key, "expected a number");
    return v.get<double>();
}

std::int64_t require_integer(const json& obj, const char* key,
                             const std::string& pointer) {
    const json& v = require(obj, key, pointer);
    if (!v.is_number_integer()) parse_fail(pointer + "/" + key, "expected an integer");
    return v.get<std::int64_t>();
}

std::string require_string(const json& obj, const char* key, const std::string& pointer) {
    const json& v = require(obj, key, pointer);
    if (!v.is_string()) parse_fail(pointer + "/" + key, "expected a string");
    return v.get<std::string>();
}

Polygon polygon_from_json(const json& arr, const std::string& pointer) {
    if (!arr.is_array()) parse_fail(pointer, "expected an array of [x, y] pairs");
    std::vector<Point2> verts;
    verts.reserve(arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const json& pair = arr[k];
        std::string ppointer = pointer + "/" + std::to_string(k);
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number())
            parse_fail(ppointer, "expected [x, y]");
        verts.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    // A trailing repeat of the first vertex is a common explicit-closure
    // convention; drop it before validation.
    if (verts.size() > 3 && verts.front() == verts.back()) verts.pop_back();
    return Polygon(std::move(verts));
}

} // namespace

RaterSet rater_set_from_json(const json& doc) {
    RaterSet set;
    set.sample_id = require_string(doc, "sample_id", "");
    const json& image = require(doc, "image", "");
    set.image_width = static_cast<double>(require_integer(image, "width", "/image"));
    set.image_height = static_cast<double>(require_integer(image, "height", "/image"));
    if (set.image_width <= 0 || set.image_height <= 0)
        throw ValidationError("image dimensions must be positive");
    if (doc.contains("instructions")) {
        if (!doc["instructions"].is_string())
            parse_fail("/instructions", "expected a string");
        set.instructions = doc["instructions"].get<std::string>();
    }

    const json& raters = require(doc, "raters", "");
    if (!raters.is_array()) parse_fail("/raters", "expected an array");
    if (raters.empty()) throw ValidationError("raters array is empty");

    std::set<std::pair<std::string, std::string>> seen;
    bool any_phase = false;
    for (std::size_t i = 0; i < raters.size(); ++i) {
        std::string pointer = "/raters/" + std::to_string(i);
        const json& entry = raters[i];
        RaterPolygon rp;
        rp.rater_id = require_string(entry, "rater_id", pointer);
        std::string phase = require_string(entry, "phase", pointer);
        try {
            rp.phase = phase_from_string(phase);
        } catch (const InvalidInputError& e) {
            parse_fail(pointer + "/phase", e.what());
        }
        any_phase = true;
        if (!seen.insert({rp.rater_id, phase}).second)
            throw ValidationError("duplicate (rater_id, phase) pair ('" +
                                  rp.rater_id + "', " + phase + ")");
        try {
            rp.polygon = polygon_from_json(require(entry, "polygon", pointer),
                                           pointer + "/polygon");
        } catch (const InvalidInputError& e) {
            throw ValidationError("rater '" + rp.rater_id + "': " + e.what());
        }
        validate_simple(rp.polygon, "rater '" + rp.rater_id + "'");
        BBox box = rp.polygon.bbox();
        if (box.x_min < 0 || box.y_min < 0 || box.x_max > set.image_width ||
            box.y_max > set.image_height)
            throw ValidationError("rater '" + rp.rater_id +
                                  "': polygon outside image extent");
        set.raters.push_back(std::move(rp));
    }
    if (!any_phase) throw ValidationError("no phase present");
    return set;
}

json rater_set_to_json(const RaterSet& set) {
    if (set.image_width != std::floor(set.image_width) ||
        set.image_height != std::floor(set.image_height))
        throw ValidationError("image dimensions must be whole pixels");
    json doc;
    doc["sample_id"] = set.sample_id;
    doc["image"] = {{"width", static_cast<std::int64_t>(set.image_width)},
                    {"height", static_cast<std::int64_t>(set.image_height)}};
    if (!set.instructions.empty()) doc["instructions"] = set.instructions;
    json raters = json::array();
    for (const RaterPolygon& rp : set.raters) {
        json verts = json::array();
        for (const Point2& p : rp.polygon.vertices())
            verts.push_back(json::array({p.x, p.y}));
        raters.push_back({{"rater_id", rp.rater_id},
                          {"phase", to_string(rp.phase)},
                          {"polygon", std::move(verts)}});
    }
    doc["raters"] = std::move(raters);
    return doc;
}

namespace {

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw NotFoundError("cannot open '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return doc;
}

} // namespace

RaterSet load_multirater(const std::filesystem::path& path) {
    return rater_set_from_json(load_json_file(path));
}

void save_multirater(const RaterSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << rater_set_to_json(set).dump(2) << '\n';
}

CocoInstance load_coco_polygon(const std::filesystem::path& coco_json_path,
                               std::int64_t image_id, std::int64_t annotation_id) {
    json doc = load_json_file(coco_json_path);
    const json& annotations = require(doc, "annotations", "");
    if (!annotations.is_array()) parse_fail("/annotations", "expected an array");

    const json* ann = nullptr;
    for (const json& a : annotations) {
        if (a.contains("id") && a["id"].is_number_integer() &&
            a["id"].get<std::int64_t>() == annotation_id) {
            ann = &a;
            break;
        }
    }
    if (!ann)
        throw NotFoundError("annotation id " + std::to_string(annotation_id) +
                            " not found");
    if (!ann->contains("image_id") ||
        (*ann)["image_id"].get<std::int64_t>() != image_id)
        throw NotFoundError("annotation " + std::to_string(annotation_id) +
                            " does not belong to image " + std::to_string(image_id));

    const json& seg = require(*ann, "segmentation", "/annotations");
    if (!seg.is_array())
        throw UnsupportedFormatError("RLE segmentation is not supported "
                                     "(polygon-typed annotations only)");
    if (seg.size() != 1)
        throw UnsupportedFormatError("multi-ring segmentation (" +
                                     std::to_string(seg.size()) +
                                     " rings) is not supported");
    const json& ring = seg[0];
    if (!ring.is_array() || ring.size() < 6 || ring.size() % 2 != 0)
        parse_fail("/annotations/.../segmentation/0", "expected a flat [x1,y1,x2,y2,...] list");

    std::vector<Point2> verts;
    verts.reserve(ring.size() / 2);
    for (std::size_t k = 0; k + 1 < ring.size(); k += 2)
        verts.push_back({ring[k].get<double>(), ring[k + 1].get<double>()});
    if (verts.size() > 3 && verts.front() == verts.back()) verts.pop_back();

    CocoInstance inst;
    inst.polygon = Polygon(std::move(verts));
    validate_simple(inst.polygon,
                    "annotation " + std::to_string(annotation_id));

    const json& bbox = require(*ann, "bbox", "/annotations");
    if (!bbox.is_array() || bbox.size() != 4)
        parse_fail("/annotations/.../bbox", "expected [x, y, w, h]");
    double bx = bbox[0].get<double>(), by = bbox[1].get<double>();
    double bw = bbox[2].get<double>(), bh = bbox[3].get<double>();
    inst.bbox = {bx, by, bx + bw, by + bh};

    const json& images = require(doc, "images", "");
    if (!images.is_array()) parse_fail("/images", "expected an array");
    bool found_image = false;
    for (const json& img : images) {
        if (img.contains("id") && img["id"].get<std::int64_t>() == image_id) {
            inst.image_width = require_number(img, "width", "/images/...");
            inst.image_height = require_number(img, "height", "/images/...");
            found_image = true;
            break;
        }
    }
    if (!found_image)
        throw NotFoundError("image id " + std::to_string(image_id) + " not found");
    return inst;
}

PreparedSample prepare_sample(const Polygon& polygon, const BBox& bbox,
                              double image_w, double image_h, double margin) {
    PreparedSample out;
    out.crop = crop_with_margin(bbox, margin, image_w, image_h);
    for (const Point2& p : polygon.vertices()) {
        if (!out.crop.contains(p))
            throw ValidationError("polygon vertex outside the clamped crop");
    }
    out.polygon = translate(polygon, {-out.crop.x_min, -out.crop.y_min});
    return out;
}

const std::vector<CocoIdRecord>& bundled_coco_ids() {
    static const std::vector<CocoIdRecord> table = {
        {1, 2592, 678926},     {2, 82696, 36233},     {3, 119677, 1084188},
        {4, 102805, 351654},   {5, 96549, 156368},    {6, 101420, 1816501},
        {7, 172595, 109320},   {8, 197658, 1706948},  {9, 216277, 1048287},
        {10, 232348, 1128607}, {11, 5060, 1731118},   {12, 181859, 47665},
        {13, 197022, 1076210}, {14, 376284, 346188},  {15, 376284, 1388327},
        {16, 416534, 102024},  {17, 543043, 135138},  {18, 8532, 464797},
        {19, 50679, 1051538},  {20, 46804, 63303},    {21, 46872, 502460},
        {22, 42070, 164994},   {23, 52017, 160713},   {24, 58539, 559122},
    };
    return table;
}

void write_coco_ids_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << "image_id,coco_image_id,coco_annotation_id\n";
    for (const CocoIdRecord& rec : bundled_coco_ids())
        out << rec.image_id << ',' << rec.coco_image_id << ','
            << rec.coco_annotation_id << '\n';
}

} // namespace polyconsensus
