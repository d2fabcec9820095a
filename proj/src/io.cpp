#include "netscan/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include <boost/tokenizer.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "netscan/error.hpp"

namespace netscan {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + fmt::format(".tmp{}", ::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw InvalidInput("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidInput("cannot rename into " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) { return fmt::format("{}", v); }

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Splits a CSV file into rows and checks the header.
class CsvReader {
public:
    CsvReader(std::string path, std::vector<std::string> header, std::size_t required)
        : path_(std::move(path)), header_(std::move(header)) {
        std::istringstream in(read_file(path_));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines_.push_back(std::move(line));
        }
        if (lines_.empty()) throw SchemaError(path_, 1, 1, "missing header");
        line_ = 1;
        fields_ = split(lines_[0]);
        const std::size_t n = fields_.size();
        if (n < required || n > header_.size()) {
            throw SchemaError(path_, 1, std::min(n, required) + 1,
                              fmt::format("expected header {}", fmt::join(header_, ",")));
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (fields_[c] != header_[c]) {
                throw SchemaError(path_, 1, c + 1,
                                  fmt::format("expected column '{}', found '{}'", header_[c], fields_[c]));
            }
        }
        columns_ = n;
    }

    std::size_t columns() const { return columns_; }

    bool next() {
        while (line_ < lines_.size()) {
            const std::string& text = lines_[line_++];
            if (text.empty()) continue;
            fields_ = split(text);
            if (fields_.size() != columns_) {
                fail(std::min(fields_.size(), columns_) + 1,
                     fmt::format("expected {} fields, found {}", columns_, fields_.size()));
            }
            return true;
        }
        return false;
    }

    const std::string& text(std::size_t c) const { return fields_[c]; }

    std::string nonempty(std::size_t c) const {
        if (fields_[c].empty()) fail(c + 1, header_[c] + " is empty");
        return fields_[c];
    }

    double number(std::size_t c) const {
        const std::string& s = fields_[c];
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            fail(c + 1, fmt::format("{} '{}' is not a number", header_[c], s));
        }
        return v;
    }

    std::optional<double> optional_number(std::size_t c) const {
        if (fields_[c].empty()) return std::nullopt;
        return number(c);
    }

    std::int64_t integer(std::size_t c) const {
        const std::string& s = fields_[c];
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            fail(c + 1, fmt::format("{} '{}' is not an integer", header_[c], s));
        }
        return v;
    }

    template <typename F>
    auto parsed(std::size_t c, F&& parse) const {
        try {
            return parse(fields_[c]);
        } catch (const Error& e) {
            fail(c + 1, e.what());
        }
    }

    Hour hour(std::size_t c) const {
        return parsed(c, [](const std::string& s) { return parse_iso_hour(s); });
    }

    [[noreturn]] void fail(std::size_t column, const std::string& message) const {
        throw SchemaError(path_, line_, column, message);
    }

private:
    static std::vector<std::string> split(const std::string& line) {
        using Sep = boost::escaped_list_separator<char>;
        boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
        return {tok.begin(), tok.end()};
    }

    std::string path_;
    std::vector<std::string> header_;
    std::vector<std::string> lines_;
    std::vector<std::string> fields_;
    std::size_t line_ = 0;  // 1-based number of the current line
    std::size_t columns_ = 0;
};

template <typename T>
T& entry_for(std::vector<T>& out, std::map<std::string, std::size_t>& index, const std::string& id) {
    const auto [it, inserted] = index.emplace(id, out.size());
    if (inserted) {
        out.emplace_back();
        out.back().sensor_id = id;
    }
    return out[it->second];
}

[[noreturn]] void json_fail(const std::string& path, const std::string& content, std::size_t byte,
                            const std::string& message) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < std::min(byte, content.size()); ++i) {
        if (content[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    throw SchemaError(path, line, column, message);
}

json parse_json(const std::string& path, const std::string& content) {
    try {
        return json::parse(content);
    } catch (const json::parse_error& e) {
        json_fail(path, content, e.byte > 0 ? e.byte - 1 : 0, "invalid JSON");
    }
}

// Structural errors after parsing have no byte offset; report line 1.
[[noreturn]] void geojson_fail(const std::string& path, const std::string& message) {
    throw SchemaError(path, 1, 1, message);
}

Polyline read_positions(const std::string& path, const json& coords, const std::string& what) {
    if (!coords.is_array()) geojson_fail(path, what + ": coordinates must be an array");
    Polyline out;
    for (const auto& c : coords) {
        if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
            geojson_fail(path, what + ": each position needs numeric lon and lat");
        }
        out.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return out;
}

json positions_json(const Polyline& line) {
    json out = json::array();
    for (const auto& p : line) out.push_back({p.lon, p.lat});
    return out;
}

std::vector<json> features_of(const std::string& path, const json& doc) {
    if (!doc.is_object() || !doc.contains("type")) geojson_fail(path, "not a GeoJSON object");
    const std::string type = doc["type"].get<std::string>();
    if (type == "FeatureCollection") {
        if (!doc.contains("features") || !doc["features"].is_array()) {
            geojson_fail(path, "FeatureCollection without a features array");
        }
        return {doc["features"].begin(), doc["features"].end()};
    }
    if (type == "Feature") return {doc};
    return {json{{"type", "Feature"}, {"properties", json::object()}, {"geometry", doc}}};
}

std::string dump(const json& doc) { return doc.dump() + "\n"; }

}  // namespace

std::vector<SensorSeries> read_counts(const std::string& path) {
    CsvReader csv(path, {"sensor_id", "timestamp", "count"}, 3);
    std::vector<SensorSeries> out;
    std::map<std::string, std::size_t> index;
    while (csv.next()) {
        SensorSeries& s = entry_for(out, index, csv.nonempty(0));
        const Hour h = csv.hour(1);
        const std::int64_t c = csv.integer(2);
        if (c < 0) csv.fail(3, "count must be non-negative");
        if (!s.hours.empty() && h <= s.hours.back()) csv.fail(2, "timestamps must increase within a sensor");
        s.hours.push_back(h);
        s.counts.push_back(c);
    }
    return out;
}

std::string counts_csv(const std::vector<SensorSeries>& data) {
    std::string out = "sensor_id,timestamp,count\n";
    for (const auto& s : data) {
        const std::string id = csv_field(s.sensor_id);
        for (std::size_t i = 0; i < s.size(); ++i) {
            out += fmt::format("{},{},{}\n", id, format_iso_hour(s.hours[i]), s.counts[i]);
        }
    }
    return out;
}

std::vector<ForecastSeries> read_forecasts(const std::string& path) {
    CsvReader csv(path, {"sensor_id", "timestamp", "mean", "std", "lower", "upper"}, 6);
    std::vector<ForecastSeries> out;
    std::map<std::string, std::size_t> index;
    while (csv.next()) {
        ForecastSeries& f = entry_for(out, index, csv.nonempty(0));
        const Hour h = csv.hour(1);
        if (!f.hours.empty() && h <= f.hours.back()) csv.fail(2, "timestamps must increase within a sensor");
        const double mean = csv.number(2), std = csv.number(3), lower = csv.number(4), upper = csv.number(5);
        if (!(std >= 0.0)) csv.fail(4, "std must be non-negative");
        if (!(lower > 0.0)) csv.fail(5, "lower bound must be positive");
        if (!(lower <= mean)) csv.fail(5, "lower bound exceeds the mean");
        if (!(mean <= upper)) csv.fail(6, "upper bound is below the mean");
        f.hours.push_back(h);
        f.mean.push_back(mean);
        f.std.push_back(std);
        f.lower.push_back(lower);
        f.upper.push_back(upper);
    }
    return out;
}

std::string forecasts_csv(const std::vector<ForecastSeries>& forecasts) {
    std::string out = "sensor_id,timestamp,mean,std,lower,upper\n";
    for (const auto& f : forecasts) {
        const std::string id = csv_field(f.sensor_id);
        for (std::size_t i = 0; i < f.size(); ++i) {
            out += fmt::format("{},{},{},{},{},{}\n", id, format_iso_hour(f.hours[i]), format_double(f.mean[i]),
                               format_double(f.std[i]), format_double(f.lower[i]), format_double(f.upper[i]));
        }
    }
    return out;
}

std::vector<SensorPlacement> read_sensors(const std::string& path) {
    CsvReader csv(path, {"sensor_id", "lon", "lat", "direction"}, 3);
    std::vector<SensorPlacement> out;
    std::map<std::string, std::size_t> seen;
    while (csv.next()) {
        SensorPlacement s;
        s.id = csv.nonempty(0);
        if (!seen.emplace(s.id, out.size()).second) csv.fail(1, "duplicate sensor id '" + s.id + "'");
        s.position = {csv.number(1), csv.number(2)};
        if (csv.columns() > 3 && !csv.text(3).empty()) {
            s.direction = csv.parsed(3, [](const std::string& t) { return direction_from_string(t); });
            if (*s.direction == Direction::undirected) s.direction.reset();
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string sensors_csv(const std::vector<SensorPlacement>& sensors) {
    std::string out = "sensor_id,lon,lat,direction\n";
    for (const auto& s : sensors) {
        out += fmt::format("{},{},{},{}\n", csv_field(s.id), format_double(s.position.lon),
                           format_double(s.position.lat), s.direction ? to_string(*s.direction) : "");
    }
    return out;
}

std::vector<EdgeInput> read_edge_list(const std::string& path) {
    CsvReader csv(path, {"edge_id", "from_lon", "from_lat", "to_lon", "to_lat", "length_m"}, 6);
    std::vector<EdgeInput> out;
    while (csv.next()) {
        EdgeInput e;
        e.id = csv.nonempty(0);
        e.geometry = {{csv.number(1), csv.number(2)}, {csv.number(3), csv.number(4)}};
        e.length_m = csv.optional_number(5);
        out.push_back(std::move(e));
    }
    return out;
}

std::string edge_list_csv(const std::vector<EdgeInput>& edges) {
    std::string out = "edge_id,from_lon,from_lat,to_lon,to_lat,length_m\n";
    for (const auto& e : edges) {
        if (e.geometry.size() < 2) throw InvalidInput("edge '" + e.id + "' has fewer than two points");
        out += fmt::format("{},{},{},{},{},{}\n", csv_field(e.id), format_double(e.geometry.front().lon),
                           format_double(e.geometry.front().lat), format_double(e.geometry.back().lon),
                           format_double(e.geometry.back().lat), e.length_m ? format_double(*e.length_m) : "");
    }
    return out;
}

std::vector<EdgeInput> read_network_geojson(const std::string& path) {
    const std::string content = read_file(path);
    const json doc = parse_json(path, content);
    std::vector<EdgeInput> out;
    std::size_t n = 0;
    for (const auto& f : features_of(path, doc)) {
        const std::string what = fmt::format("feature {}", n++);
        const json& g = f.value("geometry", json());
        if (!g.is_object() || g.value("type", "") != "LineString") {
            geojson_fail(path, what + ": geometry must be a LineString");
        }
        const json& props = f.value("properties", json::object());
        if (!props.is_object() || !props.contains("edge_id")) geojson_fail(path, what + ": missing edge_id");
        EdgeInput e;
        const json& id = props["edge_id"];
        e.id = id.is_string() ? id.get<std::string>() : id.dump();
        e.geometry = read_positions(path, g.value("coordinates", json()), what);
        if (props.contains("oneway")) {
            const json& o = props["oneway"];
            if (!o.is_boolean()) geojson_fail(path, what + ": oneway must be a boolean");
            e.oneway = o.get<bool>();
        }
        if (props.contains("length_m")) {
            if (!props["length_m"].is_number()) geojson_fail(path, what + ": length_m must be a number");
            e.length_m = props["length_m"].get<double>();
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string network_geojson(const std::vector<EdgeInput>& edges) {
    json features = json::array();
    for (const auto& e : edges) {
        json props{{"edge_id", e.id}, {"oneway", e.oneway}};
        if (e.length_m) props["length_m"] = *e.length_m;
        features.push_back({{"type", "Feature"},
                            {"properties", props},
                            {"geometry", {{"type", "LineString"}, {"coordinates", positions_json(e.geometry)}}}});
    }
    return dump({{"type", "FeatureCollection"}, {"features", features}});
}

std::vector<EdgeInput> read_network(const std::string& path) {
    if (std::filesystem::path(path).extension() == ".csv") return read_edge_list(path);
    return read_network_geojson(path);
}

Boundary read_boundary_geojson(const std::string& path) {
    const std::string content = read_file(path);
    const json doc = parse_json(path, content);
    Boundary b;
    auto polygon = [&](const json& rings) {
        if (!rings.is_array() || rings.empty()) geojson_fail(path, "polygon needs at least one ring");
        Polygon p;
        for (const auto& r : rings) p.rings.push_back(read_positions(path, r, "polygon ring"));
        b.polygons.push_back(std::move(p));
    };
    for (const auto& f : features_of(path, doc)) {
        const json& g = f.value("geometry", json());
        const std::string type = g.is_object() ? g.value("type", "") : "";
        if (type == "Polygon") {
            polygon(g.value("coordinates", json()));
        } else if (type == "MultiPolygon") {
            const json& polys = g.value("coordinates", json());
            if (!polys.is_array()) geojson_fail(path, "MultiPolygon coordinates must be an array");
            for (const auto& p : polys) polygon(p);
        } else {
            geojson_fail(path, "boundary geometry must be a Polygon or MultiPolygon");
        }
    }
    if (b.empty()) geojson_fail(path, "boundary has no polygons");
    return b;
}

std::string boundary_geojson(const Boundary& boundary) {
    json polys = json::array();
    for (const auto& p : boundary.polygons) {
        json rings = json::array();
        for (const auto& r : p.rings) {
            Polyline closed = r;
            if (!closed.empty() && !(closed.front() == closed.back())) closed.push_back(closed.front());
            rings.push_back(positions_json(closed));
        }
        polys.push_back(rings);
    }
    json geometry = boundary.polygons.size() == 1
                        ? json{{"type", "Polygon"}, {"coordinates", polys[0]}}
                        : json{{"type", "MultiPolygon"}, {"coordinates", polys}};
    return dump({{"type", "FeatureCollection"},
                 {"features", json::array({{{"type", "Feature"}, {"properties", json::object()}, {"geometry", geometry}}})}});
}

const char* const scores_header = "region_key,metric,window_start,window_end,direction,B,C,raw,log_raw,corrected,rank";

ScoreRow to_row(const RegionScore& score, const std::vector<SpatialRegion>& spatial, BoundMode bound) {
    const SpatialRegion& r = spatial[score.region.spatial];
    const double selected = score.aggregates.selected(bound);
    return ScoreRow{r.key,
                    score.metric,
                    score.region.window.start,
                    score.region.window.end,
                    r.direction,
                    selected,
                    score.aggregates.count,
                    score.value.raw,
                    score.value.log_raw,
                    score.corrected,
                    score.rank};
}

std::vector<ScoreRow> read_scores(const std::string& path) {
    CsvReader csv(path,
                  {"region_key", "metric", "window_start", "window_end", "direction", "B", "C", "raw",
                   "log_raw", "corrected", "rank"},
                  11);
    std::vector<ScoreRow> out;
    while (csv.next()) {
        ScoreRow r;
        r.region_key = csv.nonempty(0);
        r.metric = csv.parsed(1, [](const std::string& t) { return metric_from_string(t); });
        r.window_start = csv.hour(2);
        r.window_end = csv.hour(3);
        if (r.window_end < r.window_start) csv.fail(4, "window ends before it starts");
        r.direction = csv.parsed(4, [](const std::string& t) { return direction_from_string(t); });
        r.baseline = csv.number(5);
        r.count = csv.number(6);
        r.raw = csv.number(7);
        r.log_raw = csv.number(8);
        r.corrected = csv.optional_number(9);
        const std::int64_t rank = csv.integer(10);
        if (rank < 1) csv.fail(11, "rank must be at least 1");
        r.rank = static_cast<std::size_t>(rank);
        out.push_back(std::move(r));
    }
    return out;
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
    std::string out = std::string(scores_header) + "\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.region_key), to_string(r.metric),
                           format_iso_hour(r.window_start), format_iso_hour(r.window_end),
                           to_string(r.direction), format_double(r.baseline), format_double(r.count),
                           format_double(r.raw), format_double(r.log_raw),
                           r.corrected ? format_double(*r.corrected) : "", r.rank);
    }
    return out;
}

std::vector<NullDistribution> read_null(const std::string& path) {
    CsvReader csv(path, {"scan_type", "metric", "day_index", "max_score"}, 4);
    std::vector<NullDistribution> out;
    while (csv.next()) {
        const ScanType type = csv.parsed(0, [](const std::string& t) { return scan_type_from_string(t); });
        const Metric metric = csv.parsed(1, [](const std::string& t) { return metric_from_string(t); });
        const std::int64_t day = csv.integer(2);
        const double score = csv.number(3);
        if (!std::isfinite(score)) csv.fail(4, "max_score must be finite");
        auto it = std::find_if(out.begin(), out.end(), [&](const NullDistribution& n) {
            return n.scan_type == type && n.metric == metric;
        });
        if (it == out.end()) {
            out.push_back({type, metric, {}});
            it = out.end() - 1;
        }
        if (day != static_cast<std::int64_t>(it->samples.size())) {
            csv.fail(3, fmt::format("expected day_index {}", it->samples.size()));
        }
        it->samples.push_back(score);
    }
    return out;
}

std::string null_csv(const std::vector<NullDistribution>& nulls) {
    std::string out = "scan_type,metric,day_index,max_score\n";
    for (const auto& n : nulls) {
        for (std::size_t d = 0; d < n.samples.size(); ++d) {
            out += fmt::format("{},{},{},{}\n", to_string(n.scan_type), to_string(n.metric), d,
                               format_double(n.samples[d]));
        }
    }
    return out;
}

std::string thresholds_csv(const std::vector<NullDistribution>& nulls, double percentile) {
    std::string out = "scan_type,metric,percentile,threshold,samples\n";
    for (const auto& n : nulls) {
        out += fmt::format("{},{},{},{},{}\n", to_string(n.scan_type), to_string(n.metric),
                           format_double(percentile), format_double(n.threshold(percentile)), n.count());
    }
    return out;
}

namespace {

std::vector<std::string> results_header(int days) {
    std::vector<std::string> h{"trial", "scan", "forecast", "detect_day", "precision", "recall"};
    for (int d = 1; d <= days; ++d) h.push_back(fmt::format("score_d{}", d));
    for (const char* c : {"forecast_secs", "scan_secs", "flags"}) h.emplace_back(c);
    return h;
}

}  // namespace

std::vector<TrialResult> read_results(const std::string& path) {
    std::vector<std::string> first;
    {
        std::istringstream in(read_file(path));
        std::string line;
        std::getline(in, line);
        using Sep = boost::escaped_list_separator<char>;
        boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
        first.assign(tok.begin(), tok.end());
    }
    const int days = std::max(0, static_cast<int>(first.size()) - 9);
    const auto header = results_header(days);
    CsvReader csv(path, header, header.size());
    std::vector<TrialResult> out;
    while (csv.next()) {
        TrialResult r;
        const std::int64_t trial = csv.integer(0);
        if (trial < 0) csv.fail(1, "trial must be non-negative");
        r.trial = static_cast<std::uint64_t>(trial);
        r.scan = csv.parsed(1, [](const std::string& t) { return scan_type_from_string(t); });
        r.forecast = csv.parsed(2, [](const std::string& t) { return forecast_method_from_string(t); });
        if (!csv.text(3).empty()) {
            const std::int64_t d = csv.integer(3);
            if (d < 1 || d > days) csv.fail(4, "detect_day out of range");
            r.detect_day = static_cast<int>(d);
        }
        const std::size_t tail = 6 + static_cast<std::size_t>(days);
        r.flags = csv.text(tail + 2);
        if (!r.failed()) {
            r.precision = csv.number(4);
            r.recall = csv.number(5);
            if (r.precision < 0.0 || r.precision > 1.0) csv.fail(5, "precision outside [0, 1]");
            if (r.recall < 0.0 || r.recall > 1.0) csv.fail(6, "recall outside [0, 1]");
            for (std::size_t d = 0; d < static_cast<std::size_t>(days); ++d) r.scores.push_back(csv.number(6 + d));
            r.forecast_secs = csv.number(tail);
            r.scan_secs = csv.number(tail + 1);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string results_csv(const std::vector<TrialResult>& results, int days) {
    std::string out = fmt::format("{}\n", fmt::join(results_header(days), ","));
    for (const auto& r : results) {
        out += fmt::format("{},{},{},{},", r.trial, to_string(r.scan), to_string(r.forecast),
                           r.detect_day ? std::to_string(*r.detect_day) : "");
        if (r.failed()) {
            out += std::string(static_cast<std::size_t>(days) + 4, ',');
        } else {
            out += fmt::format("{},{},", format_double(r.precision), format_double(r.recall));
            for (int d = 0; d < days; ++d) {
                const auto i = static_cast<std::size_t>(d);
                out += (i < r.scores.size() ? format_double(r.scores[i]) : "") + ",";
            }
            out += fmt::format("{},{},", format_double(r.forecast_secs), format_double(r.scan_secs));
        }
        out += csv_field(r.flags) + "\n";
    }
    return out;
}

std::string grid_csv(const PlanarGrid& grid) {
    std::string out = "axis,index,value\n";
    for (std::size_t i = 0; i < grid.lon_edges().size(); ++i) {
        out += fmt::format("lon,{},{}\n", i, format_double(grid.lon_edges()[i]));
    }
    for (std::size_t i = 0; i < grid.lat_edges().size(); ++i) {
        out += fmt::format("lat,{},{}\n", i, format_double(grid.lat_edges()[i]));
    }
    return out;
}

std::string surge_csv(const SurgeSpec& spec, const std::vector<std::string>& sensor_ids) {
    std::string out = "sensor_id,day,lambda\n";
    for (std::size_t a = 0; a < spec.affected.size(); ++a) {
        for (int d = 1; d <= spec.days; ++d) {
            out += fmt::format("{},{},{}\n", csv_field(sensor_ids[spec.affected[a]]), d,
                               format_double(surge_factor(spec.omega[a], d, spec.cap)));
        }
    }
    return out;
}

std::string grid_heatmap_geojson(const PlanarGrid& grid, const std::vector<std::optional<double>>& means) {
    json features = json::array();
    const int n = grid.resolution();
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const auto& m = means.at(static_cast<std::size_t>(iy * n + ix));
            if (!m) continue;
            const BoundingBox b = grid.cell_box(ix, iy);
            const Polyline ring{{b.min_lon, b.min_lat}, {b.max_lon, b.min_lat}, {b.max_lon, b.max_lat},
                                {b.min_lon, b.max_lat}, {b.min_lon, b.min_lat}};
            features.push_back({{"type", "Feature"},
                                {"properties", {{"cell", fmt::format("{},{}", ix, iy)}, {"mean_score", *m}}},
                                {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({positions_json(ring)})}}}});
        }
    }
    return dump({{"type", "FeatureCollection"}, {"features", features}});
}

std::string network_heatmap_geojson(const std::vector<Segment>& segments,
                                    const std::vector<std::optional<double>>& means) {
    json features = json::array();
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& m = means.at(i);
        if (!m) continue;
        features.push_back({{"type", "Feature"},
                            {"properties", {{"segment_id", segments[i].id}, {"edge_id", segments[i].edge_id}, {"mean_score", *m}}},
                            {"geometry", {{"type", "LineString"}, {"coordinates", positions_json(segments[i].geometry)}}}});
    }
    return dump({{"type", "FeatureCollection"}, {"features", features}});
}

}  // namespace netscan
