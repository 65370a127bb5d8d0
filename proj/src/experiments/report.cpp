#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "fkent/experiments.hpp"

namespace fkent {

double report_row::at(std::string_view name) const {
  for (const auto& [k, v] : quantities)
    if (k == name) return v;
  throw error(errc::domain_error, "row has no quantity '" + std::string(name) + "'");
}

bool entanglement_report::flagged(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::vector<double> entanglement_report::column(std::string_view name) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    double v = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [k, x] : r.quantities)
      if (k == name) v = x;
    out.push_back(v);
  }
  return out;
}

namespace {

const char* const reserved_keys[] = {"schema_version", "scenario", "config", "config_hash", "sweep",
                                     "rows",           "fits",     "flags",  "metadata"};

std::string exact(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

}  // namespace

json to_json(const entanglement_report& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json q = json::array();
    for (const auto& [k, v] : row.quantities) q.push_back({k, v});
    rows.push_back({{"sweep_value", row.sweep_value}, {"quantities", q}});
  }
  json j = {{"schema_version", report_schema_version},
            {"scenario", std::string(to_string(r.config.kind))},
            {"config", to_json(r.config)},
            {"config_hash", config_hash(r.config)},
            {"sweep", {{"name", r.config.sweep.name}, {"grid", r.config.sweep.grid}}},
            {"rows", rows},
            {"fits", r.fits},
            {"flags", r.flags},
            {"metadata", {{"wall_seconds", r.wall_seconds}, {"threads", r.threads}}}};
  for (const auto& [k, v] : r.extra.items()) j[k] = v;
  return j;
}

void write_csv(std::ostream& out, const entanglement_report& r) {
  const std::string hash = config_hash(r.config);
  out << "sweep_param,value,quantity,config_hash\n";
  for (const auto& row : r.rows)
    for (const auto& [k, v] : row.quantities)
      out << exact(row.sweep_value) << ',' << exact(v) << ',' << k << ',' << hash << '\n';
}

entanglement_report report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != report_schema_version)
      throw error(errc::config_error, "unsupported report schema_version");
    entanglement_report r;
    r.config = parse_config(j.at("config"));
    if (j.at("config_hash").get<std::string>() != config_hash(r.config))
      throw error(errc::config_error, "config_hash does not match the embedded config");
    for (const auto& row : j.at("rows")) {
      report_row out;
      out.sweep_value = row.at("sweep_value").get<double>();
      for (const auto& q : row.at("quantities")) {
        const auto& v = q.at(1);
        out.quantities.emplace_back(q.at(0).get<std::string>(),
                                    v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
      }
      r.rows.push_back(std::move(out));
    }
    for (const auto& [k, v] : j.at("fits").items())
      r.fits[k] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
    if (j.contains("metadata")) {
      r.wall_seconds = j["metadata"].value("wall_seconds", 0.0);
      r.threads = j["metadata"].value("threads", 1);
    }
    for (const auto& [k, v] : j.items())
      if (std::find(std::begin(reserved_keys), std::end(reserved_keys), k) == std::end(reserved_keys)) r.extra[k] = v;
    return r;
  } catch (const json::exception& e) {
    throw error(errc::config_error, std::string("malformed report: ") + e.what());
  }
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::clamp(threads, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex guard;
  auto work = [&] {
    for (int i = next++; i < count && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw error(errc::domain_error, "line fit needs two or more points");
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw error(errc::domain_error, "line fit over a single abscissa");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx, syy > 0 ? sxy * sxy / (sxx * syy) : 1.0, int(x.size())};
}

double rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = 0.5 * double(i + j);
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const auto f = fit_line(rx, ry);
  return f.slope >= 0 ? std::sqrt(f.r_squared) : -std::sqrt(f.r_squared);
}

bool has_interior_maximum(const std::vector<double>& values) {
  if (values.size() < 3) return false;
  const double top = *std::max_element(values.begin(), values.end());
  const double last = values.back();
  return top - last > 1e-3 * std::max(std::abs(last), 1e-300);
}

int derivative_sign_changes(const std::vector<double>& values) {
  int changes = 0;
  int previous = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    const int sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

}  // namespace fkent
