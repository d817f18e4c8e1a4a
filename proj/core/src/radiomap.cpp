#include "risloc/radiomap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "risloc/rng.hpp"

namespace risloc {
namespace {

double quantize_dbm(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

ReferenceGrid ReferenceGrid::square(double side, double spacing, double height) {
    if (!(side > 0.0) || !(spacing > 0.0) || spacing > side) {
        throw std::domain_error("ReferenceGrid: need 0 < spacing <= side");
    }
    const int per_side = static_cast<int>(std::round(side / spacing));
    ReferenceGrid g;
    g.spacing = spacing;
    g.height = height;
    g.points.reserve(static_cast<std::size_t>(per_side) * per_side);
    for (int iy = 0; iy < per_side; ++iy) {
        for (int ix = 0; ix < per_side; ++ix) {
            g.points.push_back({(ix + 0.5) * spacing, (iy + 0.5) * spacing, height});
        }
    }
    return g;
}

ConfigurationSet generate_configuration_set(const LoadCodebook& codebook, std::size_t n,
                                            std::uint64_t seed, std::size_t n_uniform,
                                            std::size_t n_ramp, std::size_t n_random) {
    codebook.validate();
    const std::size_t d = codebook.size();
    ConfigurationSet set;
    set.seed = seed;
    set.configs.reserve(n_uniform + n_ramp + n_random);

    char name[64];
    // Uniform class: one constant reactance per configuration, the 10
    // values evenly indexed through the codebook.
    for (std::size_t i = 0; i < n_uniform; ++i) {
        const std::size_t idx =
            (n_uniform == 1) ? 0 : (i * (d - 1)) / (n_uniform - 1);
        RisConfiguration c;
        c.cls = ConfigClass::Uniform;
        std::snprintf(name, sizeof(name), "uniform-%02zu", i);
        c.id = name;
        c.loads.assign(n, Impedance(0.0, codebook.reactances[idx]));
        set.configs.push_back(std::move(c));
    }
    // Linear ramps across the element index, slope factors spanning both
    // signs so different ramps steer differently.
    const double lo = codebook.reactances.front();
    const double hi = codebook.reactances.back();
    const double mid = 0.5 * (lo + hi);
    const double half_span = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < n_ramp; ++i) {
        const double slope =
            (n_ramp == 1) ? 1.0 : -1.0 + 2.0 * static_cast<double>(i) / (n_ramp - 1);
        RisConfiguration c;
        c.cls = ConfigClass::LinearRamp;
        std::snprintf(name, sizeof(name), "ramp-%02zu", i);
        c.id = name;
        c.loads.reserve(n);
        for (std::size_t e = 0; e < n; ++e) {
            const double t = (n == 1) ? 0.0 : static_cast<double>(e) / (n - 1) - 0.5;
            c.loads.emplace_back(0.0, codebook.quantize(mid + slope * 2.0 * t * half_span));
        }
        set.configs.push_back(std::move(c));
    }
    std::mt19937_64 rng = make_rng(seed, 0x7261ULL /* "ra" */);
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    for (std::size_t i = 0; i < n_random; ++i) {
        RisConfiguration c;
        c.cls = ConfigClass::Random;
        std::snprintf(name, sizeof(name), "random-%02zu", i);
        c.id = name;
        c.loads.reserve(n);
        for (std::size_t e = 0; e < n; ++e) {
            c.loads.emplace_back(0.0, codebook.reactances[pick(rng)]);
        }
        set.configs.push_back(std::move(c));
    }
    return set;
}

RadioMap build_radio_map(const Scenario& s, const ReferenceGrid& grid,
                         const ConfigurationSet& configs, int averaging_k,
                         std::uint64_t seed, int threads) {
    if (averaging_k < 1) throw std::domain_error("build_radio_map: averaging count K >= 1");
    if (threads < 1) threads = 1;

    const ChannelWorkspace ws(s, configs.configs);
    const std::size_t l_count = grid.size();
    const std::size_t m_count = configs.size();

    RadioMap map;
    map.grid = grid;
    map.scenario_hash = s.hash();
    map.seed = seed;
    map.averaging_k = averaging_k;
    map.config_ids.reserve(m_count);
    for (const RisConfiguration& c : configs.configs) map.config_ids.push_back(c.id);
    map.rssi.assign(l_count * m_count, 0.0);

    auto fill_rows = [&](std::size_t l_begin, std::size_t l_end) {
        for (std::size_t l = l_begin; l < l_end; ++l) {
            for (std::size_t m = 0; m < m_count; ++m) {
                Complex h;
                try {
                    h = ws.channel(m, grid.points[l]);
                } catch (const std::exception& e) {
                    throw std::runtime_error("build_radio_map: cell (l=" + std::to_string(l) +
                                             ", m=" + std::to_string(m) + "): " + e.what());
                }
                std::mt19937_64 rng = make_rng(seed, l, m);
                double acc = 0.0;
                for (int k = 0; k < averaging_k; ++k) acc += rssi_sample(s, h, rng);
                map.rssi[l * m_count + m] = quantize_dbm(acc / averaging_k);
            }
        }
    };

    if (threads == 1 || l_count < 2) {
        fill_rows(0, l_count);
    } else {
        const std::size_t n_threads = std::min<std::size_t>(threads, l_count);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n_threads);
        const std::size_t chunk = (l_count + n_threads - 1) / n_threads;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    fill_rows(t * chunk, std::min(l_count, (t + 1) * chunk));
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    return map;
}

RadioMap restrict(const RadioMap& map, std::span<const std::size_t> config_subset) {
    if (config_subset.empty()) throw std::domain_error("restrict: empty configuration subset");
    const std::size_t m_old = map.configurations();
    for (std::size_t idx : config_subset) {
        if (idx >= m_old) throw std::domain_error("restrict: configuration index out of range");
    }
    RadioMap out;
    out.grid = map.grid;
    out.scenario_hash = map.scenario_hash;
    out.seed = map.seed;
    out.averaging_k = map.averaging_k;
    out.config_ids.reserve(config_subset.size());
    for (std::size_t idx : config_subset) out.config_ids.push_back(map.config_ids[idx]);
    out.rssi.reserve(map.locations() * config_subset.size());
    for (std::size_t l = 0; l < map.locations(); ++l) {
        for (std::size_t idx : config_subset) out.rssi.push_back(map.at(l, idx));
    }
    return out;
}

RadioMap restrict_rows(const RadioMap& map, std::span<const std::size_t> rows) {
    if (rows.empty()) throw std::domain_error("restrict_rows: empty row set");
    RadioMap out;
    out.grid.spacing = map.grid.spacing;
    out.grid.height = map.grid.height;
    out.scenario_hash = map.scenario_hash;
    out.seed = map.seed;
    out.averaging_k = map.averaging_k;
    out.config_ids = map.config_ids;
    out.grid.points.reserve(rows.size());
    out.rssi.reserve(rows.size() * map.configurations());
    for (std::size_t l : rows) {
        if (l >= map.locations()) throw std::domain_error("restrict_rows: row out of range");
        out.grid.points.push_back(map.grid.points[l]);
        const auto row = map.row(l);
        out.rssi.insert(out.rssi.end(), row.begin(), row.end());
    }
    return out;
}

LocationSplit split_locations(std::size_t location_count, std::uint64_t seed, double fraction) {
    if (location_count < 10) throw std::domain_error("split_locations: need at least 10 locations");
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(location_count) * fraction));
    if (n_train == 0 || n_train >= location_count) {
        throw std::domain_error("split_locations: degenerate split fraction");
    }
    std::vector<std::size_t> order(location_count);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng = make_rng(seed, 0x73706cULL /* "spl" */);
    std::shuffle(order.begin(), order.end(), rng);
    LocationSplit split;
    split.train.assign(order.begin(), order.begin() + n_train);
    split.validation.assign(order.begin() + n_train, order.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    return split;
}

void save_radio_map(const RadioMap& map, const std::string& path) {
    if (map.locations() == 0 || map.configurations() == 0) {
        throw MapFormatError("save_radio_map: refusing to write an empty map");
    }
    std::ofstream out(path);
    if (!out) throw MapFormatError("save_radio_map: cannot open " + path);
    out << "risloc-radio-map v1\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(map.scenario_hash));
    out << "scenario_hash " << buf << "\n";
    out << "seed " << map.seed << "\n";
    out << "L " << map.locations() << "\n";
    out << "M " << map.configurations() << "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", map.grid.spacing);
    out << "grid_spacing " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", map.grid.height);
    out << "grid_height " << buf << "\n";
    out << "averaging_k " << map.averaging_k << "\n";
    out << "configs";
    for (const std::string& id : map.config_ids) out << ' ' << id;
    out << "\ndata\n";
    for (std::size_t l = 0; l < map.locations(); ++l) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f", map.grid.points[l].x,
                      map.grid.points[l].y);
        out << buf;
        for (std::size_t m = 0; m < map.configurations(); ++m) {
            std::snprintf(buf, sizeof(buf), ",%.6f", map.at(l, m));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw MapFormatError("save_radio_map: write failure on " + path);
}

namespace {

std::string expect_line(std::istream& in, int& line_no) {
    std::string line;
    if (!std::getline(in, line)) {
        throw MapFormatError("radio map truncated at line " + std::to_string(line_no));
    }
    ++line_no;
    return line;
}

std::pair<std::string, std::string> split_kv(const std::string& line, int line_no) {
    const std::size_t sp = line.find(' ');
    if (sp == std::string::npos) {
        throw MapFormatError("radio map line " + std::to_string(line_no) +
                             ": expected 'key value', got '" + line + "'");
    }
    return {line.substr(0, sp), line.substr(sp + 1)};
}

}  // namespace

RadioMap load_radio_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MapFormatError("load_radio_map: cannot open " + path);
    int line_no = 0;
    if (expect_line(in, line_no) != "risloc-radio-map v1") {
        throw MapFormatError("load_radio_map: bad magic line in " + path);
    }

    RadioMap map;
    std::size_t l_count = 0, m_count = 0;
    for (;;) {
        const std::string line = expect_line(in, line_no);
        if (line == "data") break;
        auto [key, value] = split_kv(line, line_no);
        try {
            if (key == "scenario_hash") {
                map.scenario_hash = std::stoull(value, nullptr, 16);
            } else if (key == "seed") {
                map.seed = std::stoull(value);
            } else if (key == "L") {
                l_count = std::stoull(value);
            } else if (key == "M") {
                m_count = std::stoull(value);
            } else if (key == "grid_spacing") {
                map.grid.spacing = std::stod(value);
            } else if (key == "grid_height") {
                map.grid.height = std::stod(value);
            } else if (key == "averaging_k") {
                map.averaging_k = std::stoi(value);
            } else if (key == "configs") {
                std::istringstream ids(value);
                std::string id;
                while (ids >> id) map.config_ids.push_back(id);
            } else {
                throw MapFormatError("load_radio_map: unknown header key '" + key +
                                     "' at line " + std::to_string(line_no));
            }
        } catch (const std::invalid_argument&) {
            throw MapFormatError("load_radio_map: bad value for '" + key + "' at line " +
                                 std::to_string(line_no));
        }
    }
    if (l_count == 0 || m_count == 0 || map.config_ids.size() != m_count) {
        throw MapFormatError("load_radio_map: inconsistent header in " + path);
    }

    map.grid.points.reserve(l_count);
    map.rssi.reserve(l_count * m_count);
    for (std::size_t l = 0; l < l_count; ++l) {
        const std::string line = expect_line(in, line_no);
        std::istringstream row(line);
        std::string field;
        std::vector<double> vals;
        vals.reserve(m_count + 2);
        while (std::getline(row, field, ',')) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(field, &used));
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw MapFormatError("load_radio_map: bad number '" + field + "' at line " +
                                     std::to_string(line_no));
            }
        }
        if (vals.size() != m_count + 2) {
            throw MapFormatError("load_radio_map: expected " + std::to_string(m_count + 2) +
                                 " fields at line " + std::to_string(line_no) + ", got " +
                                 std::to_string(vals.size()));
        }
        map.grid.points.push_back({vals[0], vals[1], map.grid.height});
        map.rssi.insert(map.rssi.end(), vals.begin() + 2, vals.end());
    }
    return map;
}

void save_configuration_set(const ConfigurationSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MapFormatError("save_configuration_set: cannot open " + path);
    out << "risloc-config-set v1\n";
    out << "seed " << set.seed << "\n";
    char buf[32];
    for (const RisConfiguration& c : set.configs) {
        out << c.id << ' ' << to_string(c.cls);
        for (const Impedance& z : c.loads) {
            std::snprintf(buf, sizeof(buf), " %.17g", z.imag());
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw MapFormatError("save_configuration_set: write failure on " + path);
}

ConfigurationSet load_configuration_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MapFormatError("load_configuration_set: cannot open " + path);
    int line_no = 0;
    if (expect_line(in, line_no) != "risloc-config-set v1") {
        throw MapFormatError("load_configuration_set: bad magic line in " + path);
    }
    ConfigurationSet set;
    {
        auto [key, value] = split_kv(expect_line(in, line_no), line_no);
        if (key != "seed") throw MapFormatError("load_configuration_set: missing seed line");
        set.seed = std::stoull(value);
    }
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        RisConfiguration c;
        std::string cls;
        if (!(row >> c.id >> cls)) {
            throw MapFormatError("load_configuration_set: malformed line " +
                                 std::to_string(line_no));
        }
        c.cls = config_class_from_string(cls);
        double x;
        while (row >> x) c.loads.emplace_back(0.0, x);
        if (c.loads.empty()) {
            throw MapFormatError("load_configuration_set: configuration '" + c.id +
                                 "' has no loads (line " + std::to_string(line_no) + ")");
        }
        set.configs.push_back(std::move(c));
    }
    return set;
}

}  // namespace risloc
