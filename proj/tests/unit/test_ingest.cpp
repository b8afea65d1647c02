#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "eventrail/civil_time.hpp"
#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"
#include "eventrail/events.hpp"
#include "eventrail/network.hpp"
#include "eventrail/rng.hpp"
#include "eventrail/taps.hpp"
#include "eventrail/trips.hpp"
#include "scenarios.hpp"

namespace eventrail {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

std::optional<std::size_t> line_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.line();
  }
  return std::nullopt;
}

// --- civil time --------------------------------------------------------------

TEST(CivilTime, DayNumberRoundTripsAcrossCenturies) {
  for (DayNumber d = -800000; d <= 800000; d += 997) {
    EXPECT_EQ(to_day_number(from_day_number(d)), d);
  }
  EXPECT_EQ(to_day_number({1970, 1, 1}), 0);
  EXPECT_EQ(to_day_number({2000, 3, 1}) - to_day_number({2000, 2, 28}), 2);  // leap year
  EXPECT_EQ(to_day_number({1900, 3, 1}) - to_day_number({1900, 2, 28}), 1);
}

TEST(CivilTime, WeekendAndFormatting) {
  EXPECT_TRUE(is_weekend(to_day_number({2018, 9, 22})));   // Saturday
  EXPECT_TRUE(is_weekend(to_day_number({2018, 9, 23})));   // Sunday
  EXPECT_FALSE(is_weekend(to_day_number({2018, 9, 24})));  // Monday
  EXPECT_EQ(format_timestamp(make_timestamp({2018, 3, 20}, 8, 1)), "2018/03/20 08:01:00");
  EXPECT_EQ(format_clock(25 * 3600 + 61), "25:01:01");
  EXPECT_EQ(format_date(to_day_number({2019, 12, 31})), "2019-12-31");
}

TEST(CivilTime, ParsesTheAcceptedForms) {
  const Seconds t = make_timestamp({2018, 3, 20}, 8, 1);
  EXPECT_EQ(try_parse_timestamp("2018/3/20 8:01"), t);
  EXPECT_EQ(try_parse_timestamp("2018-03-20 08:01:00"), t);
  EXPECT_EQ(try_parse_timestamp("03/20/2018 08:01:00"), t);
  EXPECT_EQ(try_parse_timestamp("2018/3/20"), make_timestamp({2018, 3, 20}, 0, 0));
  EXPECT_FALSE(try_parse_timestamp("2018/13/20 8:01"));
  EXPECT_FALSE(try_parse_timestamp("2018/2/30 8:01"));
  EXPECT_FALSE(try_parse_timestamp("2018/3/20 8:61"));
  EXPECT_FALSE(try_parse_timestamp("yesterday"));
  EXPECT_EQ(try_parse_clock("24:30"), 24 * 3600 + 30 * 60);
}

TEST(CivilTime, DayOfFloorsNegativeTimes) {
  EXPECT_EQ(day_of(-1), -1);
  EXPECT_EQ(day_of(0), 0);
  EXPECT_EQ(day_of(kSecondsPerDay - 1), 0);
  EXPECT_EQ(day_of(-kSecondsPerDay), -1);
}

// --- csv ---------------------------------------------------------------------

TEST(Csv, SplitHandlesQuotes) {
  EXPECT_EQ(csv::split_line("a,\"b,c\",d"), (std::vector<std::string>{"a", "b,c", "d"}));
  EXPECT_EQ(csv::split_line("\"x \"\"y\"\"\",,"), (std::vector<std::string>{"x \"y\"", "", ""}));
  EXPECT_EQ(csv::split_line("a,b\r"), (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, EscapeRoundTrips) {
  Rng rng(11);
  const std::string alphabet = "ab,\" x";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> fields(static_cast<std::size_t>(rng.uniform_int(1, 5)));
    for (auto& f : fields) {
      const auto len = rng.uniform_int(0, 6);
      for (int k = 0; k < len; ++k) {
        f.push_back(alphabet[static_cast<std::size_t>(rng.uniform_int(0, 5))]);
      }
    }
    std::ostringstream out;
    csv::write_row(out, fields);
    std::string line = out.str();
    ASSERT_FALSE(line.empty());
    line.pop_back();  // newline
    EXPECT_EQ(csv::split_line(line), fields) << line;
  }
}

TEST(Csv, ReaderReportsPhysicalLinesAndSkipsBlanks) {
  std::istringstream in("a,b\n1,2\n\n3,4\n");
  csv::Reader r(in);
  EXPECT_EQ(r.column("b"), 1u);
  ASSERT_TRUE(r.next());
  EXPECT_EQ(r.line(), 2u);
  ASSERT_TRUE(r.next());
  EXPECT_EQ(r.line(), 4u);
  EXPECT_EQ(r.row()[0], "3");
  EXPECT_FALSE(r.next());
  EXPECT_EQ(code_of([&] { r.column("zzz"); }), ErrorCode::MissingColumn);
}

TEST(Csv, EmptySourceHasNoHeader) {
  std::istringstream in("");
  EXPECT_EQ(code_of([&] { csv::Reader r(in); }), ErrorCode::MissingColumn);
}

// --- taps --------------------------------------------------------------------

constexpr const char* kTapHeader = "card_id,timestamp,use_type,station_id\n";

std::vector<TapEvent> taps_from(const std::string& body) {
  std::istringstream in(std::string(kTapHeader) + body);
  return parse_taps(in);
}

TEST(ParseTaps, EntryRowFromTheExport) {
  const auto taps = taps_from("101,2018/3/20 8:01,Entry (Tag On),Doraville\n");
  ASSERT_EQ(taps.size(), 1u);
  EXPECT_EQ(taps[0], (TapEvent{"101", make_timestamp({2018, 3, 20}, 8, 1), UseType::Entry,
                               "Doraville"}));
}

TEST(ParseTaps, ExitRow) {
  const auto taps = taps_from("101,2018/3/20 8:28,Exit (Tag Off),Lindbergh\n");
  ASSERT_EQ(taps.size(), 1u);
  EXPECT_EQ(taps[0].use_type, UseType::Exit);
}

TEST(ParseTaps, HeaderOnlyIsEmpty) { EXPECT_TRUE(taps_from("").empty()); }

TEST(ParseTaps, ColumnsInAnyOrderWithExtras) {
  std::istringstream in("station_id,extra,use_type,timestamp,card_id\nA,zz,Exit,2018/1/2 3:04:05,9\n");
  const auto taps = parse_taps(in);
  ASSERT_EQ(taps.size(), 1u);
  EXPECT_EQ(taps[0].card_id, "9");
  EXPECT_EQ(taps[0].timestamp, make_timestamp({2018, 1, 2}, 3, 4, 5));
}

TEST(ParseTaps, MalformedRowsCarryLineNumbers) {
  const std::string good = "1,2018/3/20 8:01,Entry (Tag On),A\n";
  EXPECT_EQ(code_of([&] { taps_from(good + "2,not a time,Entry (Tag On),A\n"); }),
            ErrorCode::BadTimestamp);
  EXPECT_EQ(line_of([&] { taps_from(good + "2,not a time,Entry (Tag On),A\n"); }), 3u);
  EXPECT_EQ(code_of([&] { taps_from(good + good + "3,2018/3/20 8:01,Hop,A\n"); }),
            ErrorCode::BadUseType);
  EXPECT_EQ(line_of([&] { taps_from(good + good + "3,2018/3/20 8:01,Hop,A\n"); }), 4u);
  std::istringstream missing("card_id,timestamp,station_id\n");
  EXPECT_EQ(code_of([&] { parse_taps(missing); }), ErrorCode::MissingColumn);
}

TEST(ParseTaps, WriteThenParseRoundTrips) {
  std::vector<TapEvent> taps{{"a", make_timestamp({2018, 9, 22}, 21, 0, 7), UseType::Entry, "X"},
                             {"b,c", make_timestamp({2018, 9, 22}, 23, 59, 59), UseType::Exit, "Y"}};
  std::stringstream io;
  write_taps(io, taps);
  EXPECT_EQ(parse_taps(io), taps);
}

// --- chaining ----------------------------------------------------------------

TapEvent tap(std::string card, Seconds t, UseType u, std::string station) {
  return {std::move(card), t, u, std::move(station)};
}

const Seconds k801 = make_timestamp({2018, 3, 20}, 8, 1);
const Seconds k828 = make_timestamp({2018, 3, 20}, 8, 28);

TEST(ChainTrips, EntryThenExitIsOneTrip) {
  const std::vector<TapEvent> taps{tap("101", k801, UseType::Entry, "Doraville"),
                                   tap("101", k828, UseType::Exit, "Lindbergh")};
  const auto r = chain_trips(taps);
  ASSERT_EQ(r.trips.size(), 1u);
  EXPECT_EQ(r.trips[0], (Trip{"101", "Doraville", k801, "Lindbergh", k828, 0}));
  EXPECT_TRUE(r.anomalies.empty());
}

TEST(ChainTrips, LoneExitIsForcedEntrySelfLoop) {
  const std::vector<TapEvent> taps{tap("7", k828, UseType::Exit, "Lindbergh")};
  const auto r = chain_trips(taps);
  ASSERT_EQ(r.trips.size(), 1u);
  const Trip& t = r.trips[0];
  EXPECT_TRUE(t.has(kForcedEntry));
  EXPECT_TRUE(t.has(kSelfLoop));
  EXPECT_EQ(t.entry_station, "Lindbergh");
  EXPECT_EQ(t.entry_time, k828);
}

TEST(ChainTrips, RepeatedEntryForcesAnExit) {
  const std::vector<TapEvent> taps{tap("7", k801, UseType::Entry, "A"),
                                   tap("7", k828, UseType::Entry, "B")};
  const auto r = chain_trips(taps);
  ASSERT_EQ(r.trips.size(), 2u);
  EXPECT_TRUE(r.trips[0].has(kForcedExit));
  EXPECT_EQ(r.trips[0].exit_station, "A");
  EXPECT_EQ(r.trips[0].exit_time, k801);
  ASSERT_FALSE(r.anomalies.empty());
  EXPECT_EQ(r.anomalies[0].kind, AnomalyKind::RepeatedEntry);
}

TEST(ChainTrips, AllTwoTapOrderings) {
  // (first, second) -> number of trips and flags of the first trip.
  for (UseType a : {UseType::Entry, UseType::Exit}) {
    for (UseType b : {UseType::Entry, UseType::Exit}) {
      const std::vector<TapEvent> taps{tap("c", 100, a, "A"), tap("c", 200, b, "B")};
      const auto r = chain_trips(taps);
      const bool pair = a == UseType::Entry && b == UseType::Exit;
      EXPECT_EQ(r.trips.size(), pair ? 1u : 2u);
      if (a == UseType::Entry && b == UseType::Entry) {
        EXPECT_TRUE(r.trips[0].has(kForcedExit));
      }
      if (a == UseType::Exit) EXPECT_TRUE(r.trips[0].has(kForcedEntry));
    }
  }
}

TEST(ChainTrips, LongGapTimesOut) {
  const std::vector<TapEvent> taps{tap("c", 0, UseType::Entry, "A"),
                                   tap("c", 4 * 3600 + 1, UseType::Exit, "B")};
  const auto r = chain_trips(taps);
  EXPECT_EQ(r.trips.size(), 2u);
  EXPECT_TRUE(std::any_of(r.anomalies.begin(), r.anomalies.end(),
                          [](const Anomaly& a) { return a.kind == AnomalyKind::Timeout; }));
  const std::vector<TapEvent> exact{tap("c", 0, UseType::Entry, "A"),
                                    tap("c", 4 * 3600, UseType::Exit, "B")};
  EXPECT_EQ(chain_trips(exact).trips.size(), 1u);
}

TEST(ChainTrips, DuplicateTapsAreKeptAndFlagged) {
  const std::vector<TapEvent> taps{tap("c", 50, UseType::Entry, "A"),
                                   tap("c", 50, UseType::Entry, "A"),
                                   tap("c", 400, UseType::Exit, "B")};
  const auto r = chain_trips(taps);
  EXPECT_EQ(r.trips.size(), 2u);
  EXPECT_TRUE(std::any_of(r.anomalies.begin(), r.anomalies.end(),
                          [](const Anomaly& a) { return a.kind == AnomalyKind::DuplicateTap; }));
}

// Entries plus unmatched exits equals trips, and every tap lands in one trip.
TEST(ChainTrips, TotalityOnRandomSequences) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TapEvent> taps;
    const auto n = rng.uniform_int(0, 40);
    for (int k = 0; k < n; ++k) {
      taps.push_back(tap("c" + std::to_string(rng.uniform_int(0, 4)), rng.uniform_int(0, 30000),
                         rng.uniform() < 0.5 ? UseType::Entry : UseType::Exit,
                         std::string(1, static_cast<char>('A' + rng.uniform_int(0, 3)))));
    }
    const auto r = chain_trips(taps);
    std::size_t entries = 0;
    for (const auto& t : taps) entries += t.use_type == UseType::Entry;
    std::size_t forced_entry = 0;
    std::size_t real_taps = 0;
    for (const auto& t : r.trips) {
      forced_entry += t.has(kForcedEntry);
      real_taps += (t.has(kForcedEntry) || t.has(kForcedExit)) ? 1 : 2;
      EXPECT_GE(t.exit_time, t.entry_time);
      EXPECT_EQ(t.has(kSelfLoop), t.entry_station == t.exit_station);
    }
    EXPECT_EQ(r.trips.size(), entries + forced_entry);
    EXPECT_EQ(real_taps, taps.size());
  }
}

TEST(ChainTrips, TripsRoundTripThroughCsv) {
  std::vector<Trip> trips{{"1", "A", 10, "B", 70, 0},
                          {"2", "C", 80, "C", 80, kForcedEntry | kSelfLoop},
                          {"3", "D", 90, "D", 90, kForcedExit | kSelfLoop}};
  std::stringstream io;
  write_trips(io, trips);
  EXPECT_EQ(parse_trips(io), trips);
}

// --- events ------------------------------------------------------------------

TEST(Events, ThousandsSeparatorInAttendance) {
  std::istringstream in(
      "begin,category,name,location,attendance\n"
      "01/15/2018 15:00:00,Basketball - Hawks,Hawks vs Bulls,State Farm Arena,\"15,000\"\n"
      "01/16/2018 19:30:00,Basketball - Hawks,Hawks vs Nets,State Farm Arena,15,000\n");
  const auto ev = parse_events(in);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].attendance, 15000);
  EXPECT_EQ(ev[1].attendance, 15000);
  EXPECT_EQ(ev[0].begin, make_timestamp({2018, 1, 15}, 15, 0));
  EXPECT_FALSE(ev[0].wpdiff.has_value());
}

TEST(Events, NegativeAttendanceIsRejected) {
  std::istringstream in("begin,category,name,location,attendance\n"
                        "01/15/2018 15:00:00,Concert,X,Fox Theatre,-5\n");
  EXPECT_EQ(code_of([&] { parse_events(in); }), ErrorCode::BadAttendance);
}

TEST(Events, OptionalColumnsRoundTrip) {
  EventRecord e;
  e.begin = make_timestamp({2018, 9, 22}, 19, 30);
  e.category = "Soccer - Atlanta United";
  e.name = "ATL vs NYC";
  e.location = "Mercedes-Benz Stadium";
  e.attendance = 70000;
  e.true_attendance = 68000;
  e.wpdiff = 0.25;
  e.end_offset_minutes = 10;
  std::stringstream io;
  write_events(io, std::vector<EventRecord>{e});
  const auto back = parse_events(io);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].effective_attendance(), 68000);
  EXPECT_EQ(back[0].wpdiff, 0.25);
  EXPECT_FALSE(back[0].regularized_margin.has_value());
  EXPECT_EQ(back[0].end_offset_minutes, 10.0);
}

// --- network -----------------------------------------------------------------

NetworkModel abc() {
  return NetworkModel({{"a", "a", {}, {}}, {"b", "b", {}, {}}, {"c", "c", {}, {}},
                       {"x", "x", {}, {}}, {"y", "y", {}, {}}},
                      {{"L1", Heading::East, {"a", "b", "c"}, {120, 180}},
                       {"L2", Heading::North, {"x", "y"}, {60}}});
}

TEST(Network, TravelTimeExamples) {
  const auto net = abc();
  EXPECT_EQ(net.travel_time("a", "a"), 0);
  EXPECT_EQ(net.travel_time("a", "c"), 300);
  EXPECT_EQ(code_of([&] { net.travel_time("a", "x"); }), ErrorCode::NoCommonLine);
  EXPECT_EQ(code_of([&] { net.travel_time("a", "nowhere"); }), ErrorCode::UnknownStation);
}

TEST(Network, HeadingAndPath) {
  const auto net = abc();
  EXPECT_EQ(net.heading("a", "c"), Heading::East);
  EXPECT_EQ(net.heading("c", "a"), Heading::West);
  EXPECT_TRUE(net.passes_through("a", "b", "c"));
  EXPECT_TRUE(net.passes_through("b", "b", "c"));
  EXPECT_FALSE(net.passes_through("b", "a", "c"));
}

TEST(Network, OverridesAreDirected) {
  const NetworkModel net({{"a", "a", {}, {}}, {"b", "b", {}, {}}},
                         {{"L", Heading::East, {"a", "b"}, {100}}}, {{{"a", "b"}, 130}});
  EXPECT_EQ(net.travel_time("a", "b"), 130);
  EXPECT_EQ(net.travel_time("b", "a"), 100);
}

TEST(Network, JsonRoundTrip) {
  const auto net = testing::fixture_network();
  const auto back = NetworkModel::from_json(net.to_json());
  for (const auto& a : net.stations()) {
    for (const auto& b : net.stations()) {
      if (net.common_lines(a.id, b.id).empty()) continue;
      EXPECT_EQ(back.travel_time(a.id, b.id), net.travel_time(a.id, b.id));
    }
  }
}

TEST(Network, BadDocumentsAreRejected) {
  nlohmann::json doc = abc().to_json();
  doc["lines"][0]["segment_seconds"] = {120};
  EXPECT_EQ(code_of([&] { NetworkModel::from_json(doc); }), ErrorCode::BadNetwork);
  doc = abc().to_json();
  doc["lines"][0]["stations"][1] = "ghost";
  EXPECT_EQ(code_of([&] { NetworkModel::from_json(doc); }), ErrorCode::BadNetwork);
}

// Symmetric, zero only on the diagonal, additive along each line.
TEST(Network, TravelTimeIsALineMetric) {
  const auto net = testing::fixture_network();
  for (const auto& line : net.lines()) {
    const auto& st = line.stations;
    for (std::size_t i = 0; i < st.size(); ++i) {
      for (std::size_t j = 0; j < st.size(); ++j) {
        const Seconds d = net.travel_time(st[i], st[j]);
        EXPECT_EQ(d, net.travel_time(st[j], st[i]));
        EXPECT_EQ(d == 0, i == j);
        EXPECT_GE(d, 0);
        for (std::size_t k = std::min(i, j); k <= std::max(i, j); ++k) {
          EXPECT_EQ(net.travel_time(st[i], st[k]) + net.travel_time(st[k], st[j]), d);
        }
      }
    }
  }
}

}  // namespace
}  // namespace eventrail
