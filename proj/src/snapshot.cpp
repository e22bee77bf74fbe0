#include "collusion/snapshot.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "collusion/error.hpp"

namespace collusion {

using ordered_json = nlohmann::ordered_json;

void write_snapshot(std::ostream& out, const RatingGraph& graph) {
  ordered_json header;
  header["M"] = graph.max_value();
  header["epoch"] = format_date(graph.epoch());
  header["edges"] = graph.edges().size();
  out << header.dump() << '\n';
  for (const auto& e : graph.edges()) {
    ordered_json line;
    line["r"] = graph.reviewer_id(e.reviewer);
    line["p"] = graph.product_id(e.product);
    line["v"] = e.value;
    line["t"] = e.time;
    line["s"] = e.spamicity;
    out << line.dump() << '\n';
  }
}

RatingGraph read_snapshot(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  if (!std::getline(in, text)) throw ParseError(1, "missing snapshot header");
  ++line_no;

  double max_value = 0;
  Date epoch{};
  std::size_t expected = 0;
  try {
    auto header = nlohmann::json::parse(text);
    max_value = header.at("M").get<double>();
    auto date = parse_date(header.at("epoch").get<std::string>());
    if (!date) throw ParseError(line_no, "bad epoch date");
    epoch = *date;
    expected = header.at("edges").get<std::size_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(line_no, std::string("bad header: ") + ex.what());
  }

  RatingGraph::Builder builder(max_value, epoch);
  std::size_t seen = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    try {
      auto j = nlohmann::json::parse(text);
      builder.add(j.at("r").get<std::string>(), j.at("p").get<std::string>(),
                  j.at("v").get<double>(), j.at("t").get<std::int64_t>(),
                  j.at("s").get<double>());
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(line_no, ex.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& ex) {
      throw ParseError(line_no, ex.what());
    }
    ++seen;
  }
  if (seen != expected) {
    throw ParseError(line_no, "header announces " + std::to_string(expected) + " edges, found " +
                                  std::to_string(seen));
  }
  return std::move(builder).build();
}

void save_snapshot(const std::string& path, const RatingGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_snapshot(out, graph);
  if (!out) throw Error("write failed: " + path);
}

RatingGraph load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_snapshot(in);
}

}  // namespace collusion
