#include "vidctx/datasets.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include "subprocess.hpp"
#include "vidctx/errors.hpp"

namespace fs = std::filesystem;

namespace vidctx {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatasetError("cannot read " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// RFC-4180 style: quoted fields, "" escapes, CRLF tolerated.
std::vector<std::vector<std::string>> parse_delimited(const std::string& text,
                                                      char delimiter) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_dirty = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
            row_dirty = true;
        } else if (c == delimiter) {
            row.push_back(std::move(field));
            field.clear();
            row_dirty = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (row_dirty || !field.empty()) {
                row.push_back(std::move(field));
                field.clear();
                rows.push_back(std::move(row));
                row.clear();
                row_dirty = false;
            }
        } else {
            field.push_back(c);
            row_dirty = true;
        }
    }
    if (row_dirty || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

int required_column(const std::unordered_map<std::string, std::size_t>& header,
                    const std::string& name, const std::string& path) {
    auto it = header.find(name);
    if (it == header.end()) {
        throw DatasetError(path + ": missing column '" + name + "'");
    }
    return static_cast<int>(it->second);
}

std::vector<QAItem> load_nextqa(const DatasetDescriptor& desc) {
    const auto rows = parse_delimited(read_file(desc.annotation_path), desc.delimiter);
    if (rows.empty()) {
        throw DatasetError(desc.annotation_path + ": empty annotation file");
    }

    std::unordered_map<std::string, std::size_t> header;
    for (std::size_t i = 0; i < rows[0].size(); ++i) header[rows[0][i]] = i;

    const NextQAColumns& cols = desc.columns;
    const std::string category_col =
        desc.category_field_name.empty() ? std::string("type") : desc.category_field_name;

    const int video_ix = required_column(header, cols.video, desc.annotation_path);
    const int question_ix = required_column(header, cols.question, desc.annotation_path);
    const int gold_ix = required_column(header, cols.gold, desc.annotation_path);
    const int category_ix = required_column(header, category_col, desc.annotation_path);
    std::vector<int> answer_ix;
    for (const auto& name : cols.answers) {
        answer_ix.push_back(required_column(header, name, desc.annotation_path));
    }
    const auto qid_it = header.find(cols.qid);
    const auto frames_it = header.find(cols.frame_count);

    std::vector<QAItem> items;
    items.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = desc.annotation_path + ": row " + std::to_string(r + 1);
        if (row.size() != rows[0].size()) {
            throw DatasetError(where + ": expected " + std::to_string(rows[0].size()) +
                               " fields, got " + std::to_string(row.size()));
        }
        QAItem item;
        item.video.id = row[video_ix];
        if (item.video.id.empty()) {
            throw DatasetError(where + ": empty video id");
        }
        item.video.source = desc.video_root.empty()
                                ? item.video.id
                                : desc.video_root + "/" + item.video.id;
        item.question = row[question_ix];
        for (int ix : answer_ix) item.options.push_back(row[ix]);
        try {
            std::size_t used = 0;
            const int gold = std::stoi(row[gold_ix], &used);
            if (used != row[gold_ix].size()) throw std::invalid_argument("trailing");
            if (gold < 0 || gold >= static_cast<int>(item.options.size())) {
                throw DatasetError(where + ": gold index " + std::to_string(gold) +
                                   " out of range [0, " +
                                   std::to_string(item.options.size()) + ")");
            }
            item.answer_index = gold;
        } catch (const DatasetError&) {
            throw;
        } catch (const std::exception&) {
            throw DatasetError(where + ": gold index '" + row[gold_ix] +
                               "' is not an integer");
        }
        item.category = row[category_ix];
        if (qid_it != header.end()) item.qid = row[qid_it->second];
        if (frames_it != header.end() && !row[frames_it->second].empty()) {
            try {
                item.video.total_frames = std::stoll(row[frames_it->second]);
            } catch (const std::exception&) {
                throw DatasetError(where + ": frame count '" + row[frames_it->second] +
                                   "' is not an integer");
            }
        }
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<QAItem> load_star(const DatasetDescriptor& desc) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(desc.annotation_path));
    } catch (const DatasetError&) {
        throw;
    } catch (const std::exception& e) {
        throw DatasetError(desc.annotation_path + ": JSON parse error: " + e.what());
    }
    if (!j.is_array()) {
        throw DatasetError(desc.annotation_path + ": expected a top-level array");
    }

    const std::string category_field = desc.category_field_name.empty()
                                           ? std::string("question_id")
                                           : desc.category_field_name;

    std::vector<QAItem> items;
    items.reserve(j.size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto& rec = j.at(r);
        const std::string where =
            desc.annotation_path + ": record " + std::to_string(r + 1);
        for (const char* field : {"video_id", "question", "choices"}) {
            if (!rec.contains(field)) {
                throw DatasetError(where + ": missing field '" + field + "'");
            }
        }
        QAItem item;
        item.video.id = rec.at("video_id").get<std::string>();
        if (item.video.id.empty()) {
            throw DatasetError(where + ": empty video id");
        }
        item.video.source = desc.video_root.empty()
                                ? item.video.id
                                : desc.video_root + "/" + item.video.id;
        item.question = rec.at("question").get<std::string>();
        for (const auto& choice : rec.at("choices")) {
            if (!choice.contains("choice")) {
                throw DatasetError(where + ": choice entry missing 'choice' text");
            }
            item.options.push_back(choice.at("choice").get<std::string>());
        }
        if (item.options.size() < 2 || item.options.size() > 5) {
            throw DatasetError(where + ": expected 2..5 choices, got " +
                               std::to_string(item.options.size()));
        }
        if (rec.contains("answer") && !rec.at("answer").is_null()) {
            const std::string answer = rec.at("answer").get<std::string>();
            auto it = std::find(item.options.begin(), item.options.end(), answer);
            if (it == item.options.end()) {
                throw DatasetError(where + ": answer text is not among the choices");
            }
            item.answer_index = static_cast<int>(it - item.options.begin());
        }
        if (rec.contains("question_id")) {
            item.qid = rec.at("question_id").is_string()
                           ? rec.at("question_id").get<std::string>()
                           : rec.at("question_id").dump();
        }
        if (!rec.contains(category_field)) {
            throw DatasetError(where + ": missing field '" + category_field + "'");
        }
        std::string category = rec.at(category_field).is_string()
                                   ? rec.at(category_field).get<std::string>()
                                   : rec.at(category_field).dump();
        // ids like "Interaction_T1_13" carry the category as their prefix
        if (const auto underscore = category.find('_'); underscore != std::string::npos) {
            category = category.substr(0, underscore);
        }
        item.category = category;
        items.push_back(std::move(item));
    }
    return items;
}

bool is_image_file(const fs::path& path) {
    const std::string ext = path.extension().string();
    return ext == ".jpg" || ext == ".jpeg" || ext == ".png" || ext == ".ppm" ||
           ext == ".pgm" || ext == ".bmp";
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c); });
}

// The annotation's video id may point at a directory of frames or a video file
// with an omitted extension.
fs::path resolve_source(const VideoRef& video) {
    const fs::path source(video.source);
    if (fs::exists(source)) return source;
    for (const char* ext : {".mp4", ".avi", ".mkv", ".webm", ".mov"}) {
        fs::path candidate = source;
        candidate += ext;
        if (fs::exists(candidate)) return candidate;
    }
    throw FrameError("video source not found: " + video.source);
}

std::string read_payload(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FrameError("cannot read frame file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string bytes = buffer.str();
    if (bytes.empty()) {
        throw FrameError("frame file is empty: " + path.string());
    }
    return bytes;
}

fs::path frame_file_for_index(const fs::path& dir, std::int64_t index) {
    char padded[16];
    std::snprintf(padded, sizeof(padded), "%04lld", static_cast<long long>(index));
    const std::string unpadded = std::to_string(index);
    for (const std::string& stem : {std::string(padded), unpadded}) {
        for (const char* ext : {".jpg", ".jpeg", ".png", ".ppm", ".pgm", ".bmp"}) {
            fs::path candidate = dir / (stem + ext);
            if (fs::exists(candidate)) return candidate;
        }
    }
    throw FrameError("missing frame file for index " + std::to_string(index) + " in " +
                     dir.string());
}

fs::path make_scratch_dir() {
    std::random_device rd;
    std::mt19937_64 gen(rd());
    for (int tries = 0; tries < 16; ++tries) {
        char name[32];
        std::snprintf(name, sizeof(name), "vidctx-%016llx",
                      static_cast<unsigned long long>(gen()));
        fs::path dir = fs::temp_directory_path() / name;
        std::error_code ec;
        if (fs::create_directory(dir, ec) && !ec) return dir;
    }
    throw FrameError("cannot create scratch directory for frame extraction");
}

std::vector<FrameSample> decode_frames(const VideoRef& video, const fs::path& source,
                                       const std::vector<std::int64_t>& indices,
                                       const DecoderOptions& opts) {
    std::vector<std::int64_t> unique = indices;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    std::string select = "select=";
    for (std::size_t i = 0; i < unique.size(); ++i) {
        if (i) select += '+';
        select += "eq(n\\," + std::to_string(unique[i]) + ")";
    }

    const fs::path scratch = make_scratch_dir();
    const std::string pattern =
        (scratch / ("frame_%06d." + opts.frame_format)).string();
    const std::vector<std::string> args = {
        opts.command, "-v",  "error", "-y",     "-i",   source.string(),
        "-vf",        select, "-vsync", "0",     pattern};

    auto result = detail::run_subprocess(args);
    if (result.exit_code == 127) {
        fs::remove_all(scratch);
        throw FrameError("decoder not found: '" + opts.command + "'");
    }
    if (result.exit_code != 0) {
        fs::remove_all(scratch);
        throw FrameError("decoder failed on " + video.source + " (exit " +
                         std::to_string(result.exit_code) + "): " + result.output);
    }

    // outputs arrive in ascending frame order: frame_000001 is the lowest index
    std::map<std::int64_t, std::shared_ptr<const ImagePayload>> by_index;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.", i + 1);
        const fs::path file = scratch / (name + opts.frame_format);
        if (!fs::exists(file)) {
            fs::remove_all(scratch);
            throw FrameError("decoder produced " + std::to_string(i) + " of " +
                             std::to_string(unique.size()) + " frames for " +
                             video.source);
        }
        by_index[unique[i]] = make_image_payload(read_payload(file));
    }
    fs::remove_all(scratch);

    std::vector<FrameSample> samples;
    samples.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        samples.push_back(FrameSample{static_cast<int>(i), indices[i],
                                      by_index.at(indices[i])});
    }
    return samples;
}

}  // namespace

const char* to_string(DatasetKind k) {
    return k == DatasetKind::NextQAStyle ? "nextqa" : "star";
}

DatasetKind dataset_kind_from_string(const std::string& s) {
    if (s == "nextqa") return DatasetKind::NextQAStyle;
    if (s == "star") return DatasetKind::STARStyle;
    throw InvalidArgument("unknown dataset kind '" + s + "' (expected nextqa|star)");
}

std::vector<QAItem> load_dataset(const DatasetDescriptor& desc) {
    if (!fs::exists(desc.annotation_path)) {
        throw DatasetError("annotation file not found: " + desc.annotation_path);
    }
    if (!desc.video_root.empty() && !fs::exists(desc.video_root)) {
        throw DatasetError("video root not found: " + desc.video_root);
    }
    return desc.kind == DatasetKind::NextQAStyle ? load_nextqa(desc) : load_star(desc);
}

std::int64_t probe_total_frames(const VideoRef& video, const DecoderOptions& opts) {
    const fs::path source = resolve_source(video);
    if (fs::is_directory(source)) {
        std::int64_t count = 0;
        for (const auto& entry : fs::directory_iterator(source)) {
            if (entry.is_regular_file() && is_image_file(entry.path()) &&
                all_digits(entry.path().stem().string())) {
                ++count;
            }
        }
        if (count == 0) {
            throw FrameError("no numbered frame images in " + source.string());
        }
        return count;
    }

    auto result = detail::run_subprocess(
        {opts.probe_command, "-v", "error", "-select_streams", "v:0", "-count_frames",
         "-show_entries", "stream=nb_read_frames", "-of", "csv=p=0", source.string()});
    if (result.exit_code == 127) {
        throw FrameError("decoder not found: '" + opts.probe_command + "'");
    }
    if (result.exit_code != 0) {
        throw FrameError("probe failed on " + video.source + " (exit " +
                         std::to_string(result.exit_code) + "): " + result.output);
    }
    try {
        return std::stoll(result.output);
    } catch (const std::exception&) {
        throw FrameError("probe returned no frame count for " + video.source + ": '" +
                         result.output + "'");
    }
}

std::vector<FrameSample> extract_frames(const VideoRef& video,
                                        const std::vector<std::int64_t>& indices,
                                        const DecoderOptions& opts) {
    if (indices.empty()) return {};
    const fs::path source = resolve_source(video);

    if (fs::is_directory(source)) {
        std::vector<FrameSample> samples;
        samples.reserve(indices.size());
        std::map<std::int64_t, std::shared_ptr<const ImagePayload>> loaded;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            auto it = loaded.find(indices[i]);
            if (it == loaded.end()) {
                const fs::path file = frame_file_for_index(source, indices[i]);
                it = loaded.emplace(indices[i], make_image_payload(read_payload(file)))
                         .first;
            }
            samples.push_back(FrameSample{static_cast<int>(i), indices[i], it->second});
        }
        return samples;
    }
    return decode_frames(video, source, indices, opts);
}

double CategoryScore::accuracy_pct() const {
    if (total == 0) return 0.0;
    return std::round(static_cast<double>(correct) * 1000.0 /
                      static_cast<double>(total)) /
           10.0;
}

double ScoreReport::accuracy_pct() const {
    if (total == 0) return 0.0;
    return std::round(static_cast<double>(correct) * 1000.0 /
                      static_cast<double>(total)) /
           10.0;
}

ScoreReport score_report(const std::vector<EvalRecord>& records) {
    if (records.empty()) {
        throw InvalidArgument("score_report: no records");
    }
    std::map<std::string, CategoryScore> by_category;
    ScoreReport report;
    for (const auto& record : records) {
        auto& row = by_category[record.item.category];
        row.category = record.item.category;
        row.total += 1;
        report.total += 1;
        if (record.correct) {
            row.correct += 1;
            report.correct += 1;
        }
    }
    for (auto& [name, row] : by_category) report.categories.push_back(row);
    return report;
}

std::string format_report(const ScoreReport& report) {
    std::size_t width = std::string("Category").size();
    for (const auto& row : report.categories) width = std::max(width, row.category.size());
    width = std::max(width, std::string("Overall").size());

    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-*s  %7s  %7s  %8s\n",
                  static_cast<int>(width), "Category", "Correct", "Total", "Top-1 %");
    out << line;
    for (const auto& row : report.categories) {
        std::snprintf(line, sizeof(line), "%-*s  %7lld  %7lld  %8.1f\n",
                      static_cast<int>(width), row.category.c_str(),
                      static_cast<long long>(row.correct),
                      static_cast<long long>(row.total), row.accuracy_pct());
        out << line;
    }
    std::snprintf(line, sizeof(line), "%-*s  %7lld  %7lld  %8.1f\n",
                  static_cast<int>(width), "Overall",
                  static_cast<long long>(report.correct),
                  static_cast<long long>(report.total), report.accuracy_pct());
    out << line;
    return out.str();
}

}  // namespace vidctx
