#pragma once

#include <map>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eventrail/civil_time.hpp"
#include "eventrail/taps.hpp"

namespace eventrail {

// Service days start at `day_start_hour` (03:00 by default) and are cut into
// equal left-closed bins.
struct BinConfig {
  int day_start_hour = 3;
  Seconds bin_width = 900;

  int bins_per_day() const { return static_cast<int>(kSecondsPerDay / bin_width); }
};

struct BinIndex {
  DayNumber service_day = 0;
  int bin = 0;

  friend bool operator==(const BinIndex&, const BinIndex&) = default;
};

BinIndex assign_bin(Seconds t, const BinConfig& config = {});
Seconds bin_start(DayNumber service_day, int bin, const BinConfig& config = {});

enum class DayType { Weekday, Weekend };

const char* to_string(DayType d);
DayType day_type_of(DayNumber service_day);

struct SignatureBin {
  double mean = 0.0;
  double p10 = 0.0;  // low band edge (10th percentile by default)
  double p90 = 0.0;  // high band edge (90th percentile by default)
  int n_days = 0;
};

struct SignatureOptions {
  double low_percentile = 0.10;
  double high_percentile = 0.90;
  std::size_t min_days = 8;
  BinConfig bins;
};

struct StationSignature {
  std::string station_id;
  DayType day_type = DayType::Weekday;
  UseType direction = UseType::Entry;
  BinConfig bins;
  std::vector<SignatureBin> values;
};

// Per-bin tap counts at one station for one service day.
std::vector<double> counts_for_day(std::span<const TapEvent> taps, std::string_view station,
                                   UseType direction, DayNumber service_day,
                                   const BinConfig& config = {});
// Counts for every service day that has at least one tap anywhere in `taps`.
std::map<DayNumber, std::vector<double>> daily_counts(std::span<const TapEvent> taps,
                                                      std::string_view station, UseType direction,
                                                      const BinConfig& config = {});
// Service days present in `taps` with the given day type, minus `exclude`.
std::vector<DayNumber> baseline_days(std::span<const TapEvent> taps, DayType day_type,
                                     std::span<const DayNumber> exclude,
                                     const BinConfig& config = {});

StationSignature signature_from_counts(std::string station, DayType day_type, UseType direction,
                                       std::span<const std::vector<double>> per_day,
                                       const SignatureOptions& options = {});
// Days in `days` whose type differs from `day_type` are ignored.
// Throws EmptyBaseline when no day remains, InsufficientBaseline below min_days.
StationSignature build_signature(std::span<const TapEvent> taps, std::string_view station,
                                 UseType direction, DayType day_type,
                                 std::span<const DayNumber> days,
                                 const SignatureOptions& options = {});

struct EventRidershipEstimate {
  std::string station_id;
  std::string event_ref;
  bool exceeded = false;  // false: no bin rose above the high band, total = 0
  int t_start = 0;
  int t_end = -1;
  std::vector<double> r_a;  // event riders per bin over [t_start, t_end]
  double total = 0.0;
  double upper_bound = 0.0;
};

// r_a(t) = max(r_e(t) - mean(t), 0) where r_e(t) > p90(t), else 0; the span
// [t_start, t_end] runs from the first to the last exceeding bin. The upper
// bound sums r_e(t) over the span padded by `pad_bins` on both sides,
// counting only bins where r_e(t) > mean(t).
EventRidershipEstimate estimate_event_ridership(const StationSignature& signature,
                                                std::span<const double> event_day_counts,
                                                std::string event_ref = {}, int pad_bins = 2);

// Sum of r_a(t) over bins [first_bin, last_bin] (clamped to the day).
double ridership_increment(const StationSignature& signature,
                           std::span<const double> event_day_counts, int first_bin, int last_bin);

// --- Post-event throughput -------------------------------------------------

struct GameArrivals {
  std::vector<Seconds> arrivals;  // station entry times
  Seconds end_time = 0;           // adjusted end: start + usual length + offset
};

// Usual length after the scheduled start: soccer 1h50, football 3h10.
// Throws InvalidArgument for other categories.
Seconds average_game_length(std::string_view category);
Seconds adjusted_end_time(Seconds scheduled_start, Seconds game_length, double offset_minutes);

struct ThroughputConfig {
  Seconds bin_width = 300;
  Seconds before = 40 * 60;
  Seconds after = 80 * 60;

  int bins() const { return static_cast<int>((before + after) / bin_width); }
};

struct ThroughputCurve {
  ThroughputConfig config;
  std::vector<std::vector<double>> per_game;
  std::vector<double> mean;
  std::vector<double> percent;  // mean / sum(mean)
};

ThroughputCurve throughput_curve(std::span<const GameArrivals> games,
                                 const ThroughputConfig& config = {});

// --- Export ------------------------------------------------------------------

void write_signature_csv(std::ostream& out, const StationSignature& sig);
void write_estimate_csv(std::ostream& out, const StationSignature& sig,
                        std::span<const double> event_day_counts,
                        const EventRidershipEstimate& estimate);
nlohmann::json estimate_report(const EventRidershipEstimate& estimate);
void write_throughput_csv(std::ostream& out, const ThroughputCurve& curve);
ThroughputCurve read_throughput_csv(std::istream& in);

}  // namespace eventrail
