#include "eventrail/signatures.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"
#include "eventrail/stats.hpp"

namespace eventrail {

BinIndex assign_bin(Seconds t, const BinConfig& config) {
  const Seconds shifted = t - static_cast<Seconds>(config.day_start_hour) * 3600;
  const DayNumber day = day_of(shifted);
  const Seconds into = shifted - midnight_of(day);
  return {day, static_cast<int>(into / config.bin_width)};
}

Seconds bin_start(DayNumber service_day, int bin, const BinConfig& config) {
  return midnight_of(service_day) + static_cast<Seconds>(config.day_start_hour) * 3600 +
         bin * config.bin_width;
}

const char* to_string(DayType d) { return d == DayType::Weekend ? "WEEKEND" : "WEEKDAY"; }

DayType day_type_of(DayNumber service_day) {
  return is_weekend(service_day) ? DayType::Weekend : DayType::Weekday;
}

std::vector<double> counts_for_day(std::span<const TapEvent> taps, std::string_view station,
                                   UseType direction, DayNumber service_day,
                                   const BinConfig& config) {
  std::vector<double> counts(static_cast<std::size_t>(config.bins_per_day()), 0.0);
  for (const auto& tap : taps) {
    if (tap.use_type != direction || tap.station_id != station) continue;
    const auto b = assign_bin(tap.timestamp, config);
    if (b.service_day == service_day) counts[static_cast<std::size_t>(b.bin)] += 1.0;
  }
  return counts;
}

std::map<DayNumber, std::vector<double>> daily_counts(std::span<const TapEvent> taps,
                                                      std::string_view station, UseType direction,
                                                      const BinConfig& config) {
  std::map<DayNumber, std::vector<double>> out;
  const auto bins = static_cast<std::size_t>(config.bins_per_day());
  for (const auto& tap : taps) {
    const auto b = assign_bin(tap.timestamp, config);
    auto& day = out[b.service_day];
    if (day.empty()) day.assign(bins, 0.0);
    if (tap.use_type == direction && tap.station_id == station) {
      day[static_cast<std::size_t>(b.bin)] += 1.0;
    }
  }
  return out;
}

std::vector<DayNumber> baseline_days(std::span<const TapEvent> taps, DayType day_type,
                                     std::span<const DayNumber> exclude,
                                     const BinConfig& config) {
  std::set<DayNumber> days;
  for (const auto& tap : taps) days.insert(assign_bin(tap.timestamp, config).service_day);
  std::vector<DayNumber> out;
  for (DayNumber d : days) {
    if (day_type_of(d) != day_type) continue;
    if (std::find(exclude.begin(), exclude.end(), d) != exclude.end()) continue;
    out.push_back(d);
  }
  return out;
}

StationSignature signature_from_counts(std::string station, DayType day_type, UseType direction,
                                       std::span<const std::vector<double>> per_day,
                                       const SignatureOptions& options) {
  if (per_day.empty()) {
    throw Error(ErrorCode::EmptyBaseline, "no baseline days for station '" + station + "'");
  }
  if (per_day.size() < options.min_days) {
    throw Error(ErrorCode::InsufficientBaseline,
                std::to_string(per_day.size()) + " baseline days for '" + station +
                    "', need at least " + std::to_string(options.min_days));
  }
  const auto bins = static_cast<std::size_t>(options.bins.bins_per_day());
  StationSignature sig{std::move(station), day_type, direction, options.bins, {}};
  sig.values.resize(bins);
  std::vector<double> sample(per_day.size());
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t d = 0; d < per_day.size(); ++d) {
      if (per_day[d].size() != bins) {
        throw Error(ErrorCode::LengthMismatch, "day count vector has the wrong number of bins");
      }
      sample[d] = per_day[d][b];
    }
    std::sort(sample.begin(), sample.end());
    auto& v = sig.values[b];
    v.mean = stats::mean(sample);
    v.p10 = stats::quantile_sorted(sample, options.low_percentile);
    v.p90 = stats::quantile_sorted(sample, options.high_percentile);
    v.n_days = static_cast<int>(sample.size());
  }
  return sig;
}

StationSignature build_signature(std::span<const TapEvent> taps, std::string_view station,
                                 UseType direction, DayType day_type,
                                 std::span<const DayNumber> days,
                                 const SignatureOptions& options) {
  std::set<DayNumber> wanted;
  for (DayNumber d : days) {
    if (day_type_of(d) == day_type) wanted.insert(d);
  }
  const auto bins = static_cast<std::size_t>(options.bins.bins_per_day());
  std::map<DayNumber, std::vector<double>> counts;
  for (DayNumber d : wanted) counts[d].assign(bins, 0.0);
  for (const auto& tap : taps) {
    if (tap.use_type != direction || tap.station_id != station) continue;
    const auto b = assign_bin(tap.timestamp, options.bins);
    const auto it = counts.find(b.service_day);
    if (it != counts.end()) it->second[static_cast<std::size_t>(b.bin)] += 1.0;
  }
  std::vector<std::vector<double>> per_day;
  per_day.reserve(counts.size());
  for (auto& [day, c] : counts) per_day.push_back(std::move(c));
  return signature_from_counts(std::string(station), day_type, direction, per_day, options);
}

namespace {
double excess(const SignatureBin& bin, double observed) {
  if (observed <= bin.p90) return 0.0;
  return std::max(observed - bin.mean, 0.0);
}
}  // namespace

EventRidershipEstimate estimate_event_ridership(const StationSignature& signature,
                                                std::span<const double> event_day_counts,
                                                std::string event_ref, int pad_bins) {
  if (event_day_counts.size() != signature.values.size()) {
    throw Error(ErrorCode::LengthMismatch, "event-day counts do not align with the signature");
  }
  EventRidershipEstimate est;
  est.station_id = signature.station_id;
  est.event_ref = std::move(event_ref);
  const int n = static_cast<int>(event_day_counts.size());
  int first = -1;
  int last = -1;
  for (int t = 0; t < n; ++t) {
    if (event_day_counts[t] > signature.values[t].p90) {
      if (first < 0) first = t;
      last = t;
    }
  }
  if (first < 0) return est;

  est.exceeded = true;
  est.t_start = first;
  est.t_end = last;
  for (int t = first; t <= last; ++t) {
    const double r = excess(signature.values[t], event_day_counts[t]);
    est.r_a.push_back(r);
    est.total += r;
  }
  for (int t = std::max(0, first - pad_bins); t <= std::min(n - 1, last + pad_bins); ++t) {
    if (event_day_counts[t] > signature.values[t].mean) est.upper_bound += event_day_counts[t];
  }
  return est;
}

double ridership_increment(const StationSignature& signature,
                           std::span<const double> event_day_counts, int first_bin, int last_bin) {
  if (event_day_counts.size() != signature.values.size()) {
    throw Error(ErrorCode::LengthMismatch, "event-day counts do not align with the signature");
  }
  const int n = static_cast<int>(event_day_counts.size());
  double sum = 0.0;
  for (int t = std::max(0, first_bin); t <= std::min(n - 1, last_bin); ++t) {
    sum += excess(signature.values[t], event_day_counts[t]);
  }
  return sum;
}

Seconds average_game_length(std::string_view category) {
  std::string lower(category);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.find("soccer") != std::string::npos) return (60 + 50) * 60;
  if (lower.find("football") != std::string::npos) return (3 * 60 + 10) * 60;
  throw Error(ErrorCode::InvalidArgument,
              "no usual game length for category '" + std::string(category) + "'");
}

Seconds adjusted_end_time(Seconds scheduled_start, Seconds game_length, double offset_minutes) {
  return scheduled_start + game_length + static_cast<Seconds>(offset_minutes * 60.0);
}

ThroughputCurve throughput_curve(std::span<const GameArrivals> games,
                                 const ThroughputConfig& config) {
  if (games.empty()) throw Error(ErrorCode::EmptyGameList, "throughput curve needs games");
  const int bins = config.bins();
  ThroughputCurve curve{config, {}, std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};
  for (const auto& game : games) {
    std::vector<double> counts(bins, 0.0);
    const Seconds from = game.end_time - config.before;
    for (Seconds t : game.arrivals) {
      if (t < from || t >= game.end_time + config.after) continue;
      counts[static_cast<std::size_t>((t - from) / config.bin_width)] += 1.0;
    }
    for (int b = 0; b < bins; ++b) curve.mean[b] += counts[b];
    curve.per_game.push_back(std::move(counts));
  }
  double total = 0.0;
  for (auto& m : curve.mean) {
    m /= static_cast<double>(games.size());
    total += m;
  }
  if (total <= 0.0) {
    throw Error(ErrorCode::EmptyGameList, "no arrivals inside the throughput window");
  }
  for (int b = 0; b < bins; ++b) curve.percent[b] = curve.mean[b] / total;
  return curve;
}

namespace {
// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}
}  // namespace

void write_signature_csv(std::ostream& out, const StationSignature& sig) {
  out << "bin,bin_start,mean,p10,p90,n_days\n";
  const Seconds start = static_cast<Seconds>(sig.bins.day_start_hour) * 3600;
  for (std::size_t b = 0; b < sig.values.size(); ++b) {
    const auto& v = sig.values[b];
    const std::string fields[] = {std::to_string(b),
                                  format_clock(start + static_cast<Seconds>(b) * sig.bins.bin_width),
                                  num(v.mean), num(v.p10), num(v.p90), std::to_string(v.n_days)};
    csv::write_row(out, fields);
  }
}

void write_estimate_csv(std::ostream& out, const StationSignature& sig,
                        std::span<const double> event_day_counts,
                        const EventRidershipEstimate& estimate) {
  out << "bin,bin_start,event_count,baseline_mean,baseline_p90,event_riders\n";
  const Seconds start = static_cast<Seconds>(sig.bins.day_start_hour) * 3600;
  for (std::size_t b = 0; b < sig.values.size(); ++b) {
    const int t = static_cast<int>(b);
    double r = 0.0;
    if (estimate.exceeded && t >= estimate.t_start && t <= estimate.t_end) {
      r = estimate.r_a[static_cast<std::size_t>(t - estimate.t_start)];
    }
    const std::string fields[] = {std::to_string(b),
                                  format_clock(start + static_cast<Seconds>(b) * sig.bins.bin_width),
                                  num(event_day_counts[b]), num(sig.values[b].mean),
                                  num(sig.values[b].p90), num(r)};
    csv::write_row(out, fields);
  }
}

nlohmann::json estimate_report(const EventRidershipEstimate& estimate) {
  nlohmann::json doc;
  doc["report_version"] = 1;
  doc["station_id"] = estimate.station_id;
  doc["event_ref"] = estimate.event_ref;
  doc["exceeded"] = estimate.exceeded;
  doc["t_start"] = estimate.exceeded ? nlohmann::json(estimate.t_start) : nlohmann::json();
  doc["t_end"] = estimate.exceeded ? nlohmann::json(estimate.t_end) : nlohmann::json();
  doc["total"] = estimate.total;
  doc["upper_bound"] = estimate.upper_bound;
  return doc;
}

void write_throughput_csv(std::ostream& out, const ThroughputCurve& curve) {
  out << "bin,offset_minutes,mean,percent\n";
  for (std::size_t b = 0; b < curve.mean.size(); ++b) {
    const Seconds offset = -curve.config.before + static_cast<Seconds>(b) * curve.config.bin_width;
    const std::string fields[] = {std::to_string(b), std::to_string(offset / 60),
                                  num(curve.mean[b]), num(curve.percent[b])};
    csv::write_row(out, fields);
  }
}

ThroughputCurve read_throughput_csv(std::istream& in) {
  csv::Reader reader(in);
  const auto c_offset = reader.column("offset_minutes");
  const auto c_mean = reader.column("mean");
  const auto c_percent = reader.column("percent");
  ThroughputCurve curve;
  std::vector<Seconds> offsets;
  while (reader.next()) {
    const auto& row = reader.row();
    try {
      offsets.push_back(std::stoll(row.at(c_offset)) * 60);
      curve.mean.push_back(std::stod(row.at(c_mean)));
      curve.percent.push_back(std::stod(row.at(c_percent)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadField, "bad throughput row", reader.line());
    }
  }
  if (offsets.size() < 2) throw Error(ErrorCode::BadField, "throughput curve needs two bins");
  curve.config.bin_width = offsets[1] - offsets[0];
  curve.config.before = -offsets.front();
  curve.config.after = offsets.back() + curve.config.bin_width;
  return curve;
}

}  // namespace eventrail
