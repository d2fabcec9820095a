#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netscan/evaluate.hpp"
#include "netscan/geo.hpp"
#include "netscan/grid.hpp"
#include "netscan/network.hpp"
#include "netscan/null_distribution.hpp"
#include "netscan/scan.hpp"
#include "netscan/series.hpp"
#include "netscan/simulate.hpp"

namespace netscan {

// Writes to a temporary file next to `path` and renames it into place, so a
// failed run never leaves a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Shortest text that parses back to the same double.
std::string format_double(double v);

// sensor_id,timestamp,count. Sensors keep their first-appearance order;
// timestamps must increase within a sensor.
std::vector<SensorSeries> read_counts(const std::string& path);
std::string counts_csv(const std::vector<SensorSeries>& data);

// sensor_id,timestamp,mean,std,lower,upper
std::vector<ForecastSeries> read_forecasts(const std::string& path);
std::string forecasts_csv(const std::vector<ForecastSeries>& forecasts);

// sensor_id,lon,lat[,direction]
std::vector<SensorPlacement> read_sensors(const std::string& path);
std::string sensors_csv(const std::vector<SensorPlacement>& sensors);

// edge_id,from_lon,from_lat,to_lon,to_lat,length_m (length may be empty)
std::vector<EdgeInput> read_edge_list(const std::string& path);
std::string edge_list_csv(const std::vector<EdgeInput>& edges);

// FeatureCollection of LineStrings with `edge_id` and optional `oneway`.
std::vector<EdgeInput> read_network_geojson(const std::string& path);
std::string network_geojson(const std::vector<EdgeInput>& edges);

// Either format, chosen by extension (.csv or anything else for GeoJSON).
std::vector<EdgeInput> read_network(const std::string& path);

// Polygon or MultiPolygon, bare or wrapped in a Feature/FeatureCollection.
Boundary read_boundary_geojson(const std::string& path);
std::string boundary_geojson(const Boundary& boundary);

struct ScoreRow {
    std::string region_key;
    Metric metric = Metric::ebp;
    Hour window_start = 0;
    Hour window_end = 0;
    Direction direction = Direction::undirected;
    double baseline = 0.0;
    double count = 0.0;
    double raw = 1.0;
    double log_raw = 0.0;
    std::optional<double> corrected;
    std::size_t rank = 0;

    friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

// B is the baseline aggregate the metric used.
ScoreRow to_row(const RegionScore& score, const std::vector<SpatialRegion>& spatial,
                BoundMode bound = BoundMode::mean);

// region_key,metric,window_start,window_end,direction,B,C,raw,log_raw,corrected,rank
extern const char* const scores_header;
std::vector<ScoreRow> read_scores(const std::string& path);
std::string scores_csv(const std::vector<ScoreRow>& rows);

// scan_type,metric,day_index,max_score
std::vector<NullDistribution> read_null(const std::string& path);
std::string null_csv(const std::vector<NullDistribution>& nulls);
// scan_type,metric,percentile,threshold,samples
std::string thresholds_csv(const std::vector<NullDistribution>& nulls, double percentile);

// trial,scan,forecast,detect_day,precision,recall,score_d1,...,forecast_secs,scan_secs,flags
std::vector<TrialResult> read_results(const std::string& path);
std::string results_csv(const std::vector<TrialResult>& results, int days = 3);

// axis,index,value
std::string grid_csv(const PlanarGrid& grid);

// sensor_id,day,lambda for every affected sensor and outbreak day.
std::string surge_csv(const SurgeSpec& spec, const std::vector<std::string>& sensor_ids);

// Cells or segments with a score, as polygons or polylines carrying
// `mean_score`. No-data entries are omitted.
std::string grid_heatmap_geojson(const PlanarGrid& grid, const std::vector<std::optional<double>>& means);
std::string network_heatmap_geojson(const std::vector<Segment>& segments,
                                    const std::vector<std::optional<double>>& means);

}  // namespace netscan
