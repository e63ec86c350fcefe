#include "posetlim/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace posetlim {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << body;
}

std::vector<std::pair<int, int>> read_pairs(const json& j, const std::string& path) {
    std::vector<std::pair<int, int>> pairs;
    if (!j.contains("relations")) return pairs;
    for (const auto& e : j.at("relations")) {
        if (!e.is_array() || e.size() != 2)
            throw IoError(path + ": each relation must be a pair [i,j]");
        pairs.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return pairs;
}

} // namespace

Poset read_poset_json(const std::string& path, ClosurePolicy policy) {
    const json j = load_json(path);
    if (!j.contains("n")) throw IoError(path + ": missing \"n\"");
    return build_poset(j.at("n").get<int>(), read_pairs(j, path), policy);
}

void write_poset_json(const std::string& path, const Poset& p) {
    json j;
    j["n"] = p.size();
    j["closed"] = false;
    json rels = json::array();
    for (auto [i, k] : transitive_reduction(p)) rels.push_back(json::array({i, k}));
    j["relations"] = std::move(rels);
    save_text(path, j.dump() + "\n");
}

Digraph read_digraph_json(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("n")) throw IoError(path + ": missing \"n\"");
    const int n = j.at("n").get<int>();
    Digraph g(n);
    for (auto [i, k] : read_pairs(j, path)) {
        if (i < 1 || i > n || k < 1 || k > n)
            throw ParameterRangeError(path + ": edge label out of range");
        g.add_edge(i, k);
    }
    return g;
}

namespace {

std::vector<std::vector<double>> read_matrix(const json& j, const char* key,
                                             const std::string& path) {
    if (!j.contains(key)) throw IoError(path + ": missing \"" + key + "\"");
    std::vector<std::vector<double>> m;
    for (const auto& row : j.at(key)) m.push_back(row.get<std::vector<double>>());
    return m;
}

} // namespace

StepKernel read_step_kernel_json(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("mass")) throw IoError(path + ": missing \"mass\"");
    auto mass = j.at("mass").get<std::vector<double>>();
    auto values = read_matrix(j, "values", path);
    const auto order_rows = read_matrix(j, "order", path);
    const std::size_t n = mass.size();
    if (order_rows.size() != n)
        throw IoError(path + ": \"order\" must be an NxN matrix");
    BitMatrix order(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (order_rows[i].size() != n)
            throw IoError(path + ": \"order\" must be an NxN matrix");
        for (std::size_t k = 0; k < n; ++k)
            if (order_rows[i][k] != 0.0) order.set(int(i), int(k));
    }
    return StepKernel(std::move(mass), std::move(values), std::move(order));
}

void write_step_kernel_json(const std::string& path, const StepKernel& k) {
    json j;
    j["mass"] = k.mass;
    j["values"] = k.values;
    std::vector<std::vector<int>> order(static_cast<std::size_t>(k.parts()),
                                        std::vector<int>(static_cast<std::size_t>(k.parts()), 0));
    for (int i = 0; i < k.parts(); ++i)
        for (int c = 0; c < k.parts(); ++c)
            if (k.part_order.get(i, c)) order[std::size_t(i)][std::size_t(c)] = 1;
    j["order"] = order;
    save_text(path, j.dump() + "\n");
}

StepFunction read_step_function_json(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("mass")) throw IoError(path + ": missing \"mass\"");
    return StepFunction(j.at("mass").get<std::vector<double>>(), read_matrix(j, "values", path));
}

std::string bounds_to_json(const CutDistanceBounds& b) {
    json j;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["coupling"] = b.coupling;
    return j.dump();
}

namespace {

double parse_number(const std::string& s, const char* what) {
    if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParameterRangeError(std::string("cannot parse ") + what + " from '" + s + "'");
    }
}

} // namespace

KernelPtr parse_kernel_spec(const std::string& spec) {
    const auto pos = spec.find(':');
    const std::string head = spec.substr(0, pos);
    const std::string rest = pos == std::string::npos ? "" : spec.substr(pos + 1);

    if (head == "two_point") return two_point(parse_number(rest, "p"));
    if (head == "threshold") return threshold(parse_number(rest, "a"));
    if (head == "total") return total_unit();
    if (head == "trivial") return trivial_kernel();
    if (head == "product2d") return product2d();
    if (head == "interval") return interval_kernel();
    if (head == "from_poset") return from_poset_kernel(read_poset_json(rest));
    if (head == "step") return step_as_kernel(read_step_kernel_json(rest));
    if (head == "constant") return constant_candidate(parse_number(rest, "c"));
    if (head == "thin") {
        const auto cut = rest.rfind(':');
        if (cut == std::string::npos)
            throw ParameterRangeError("thin spec needs thin:<base>:<s>");
        return thin(parse_kernel_spec(rest.substr(0, cut)),
                    parse_number(rest.substr(cut + 1), "s"));
    }
    throw ParameterRangeError("unknown kernel spec '" + spec + "'");
}

std::optional<StepKernel> step_form_of_spec(const std::string& spec) {
    const auto pos = spec.find(':');
    const std::string head = spec.substr(0, pos);
    const std::string rest = pos == std::string::npos ? "" : spec.substr(pos + 1);

    if (head == "two_point") return step_two_point(parse_number(rest, "p"));
    if (head == "trivial") return StepKernel({1.0}, {{0.0}}, BitMatrix(1));
    if (head == "from_poset") return step_from_poset(read_poset_json(rest));
    if (head == "step") return read_step_kernel_json(rest);
    if (head == "thin") {
        const auto cut = rest.rfind(':');
        if (cut == std::string::npos)
            throw ParameterRangeError("thin spec needs thin:<base>:<s>");
        const double s = parse_number(rest.substr(cut + 1), "s");
        if (s < 0.0 || s > 1.0) throw ParameterRangeError("thinning probability in [0,1]");
        auto base = step_form_of_spec(rest.substr(0, cut));
        if (!base) return std::nullopt;
        const int n = base->parts();
        std::vector<double> mass;
        for (double m : base->mass) mass.push_back(s * m);
        mass.push_back(1.0 - s);
        std::vector<std::vector<double>> values(static_cast<std::size_t>(n) + 1,
                                                std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
        BitMatrix order(n + 1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                values[std::size_t(i)][std::size_t(j)] = base->values[std::size_t(i)][std::size_t(j)];
                if (base->part_order.get(i, j)) order.set(i, j);
            }
        return StepKernel(std::move(mass), std::move(values), std::move(order));
    }
    return std::nullopt;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

} // namespace

void CsvWriter::add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

std::string CsvWriter::str() const {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_quote(row[i]);
        }
        out << "\r\n";
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
    return out.str();
}

void CsvWriter::write_file(const std::string& path) const { save_text(path, str()); }

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_manifest_csv(const std::string& path, const std::string& command,
                        std::uint64_t seed,
                        const std::vector<std::pair<std::string, std::uint64_t>>& digests) {
    CsvWriter csv({"key", "value"});
    csv.add_row({"command", command});
    csv.add_row({"seed", std::to_string(seed)});
    csv.add_row({"version", kVersion});
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    csv.add_row({"timestamp_unix",
                 std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now).count())});
    for (const auto& [name, digest] : digests) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(digest));
        csv.add_row({"file:" + name, hex});
    }
    csv.write_file(path);
}

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<double>& xs,
                          const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    const int width = 640, height = 420, margin = 56;
    double xmin = xs.empty() ? 0.0 : xs.front(), xmax = xmin;
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    double ymin = 0.0, ymax = 1e-12;
    for (const auto& [name, ys] : series)
        for (double y : ys) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    auto px = [&](double x) {
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto py = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };

    static const char* colors[] = {"#1f6fb2", "#c24d2c", "#3a7d44", "#7d3a6f"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << margin << "\" y=\"" << height - margin + 18 << "\" font-size=\"11\">"
        << format_double(xmin) << "</text>\n";
    svg << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 18
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(xmax) << "</text>\n";
    svg << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ymin) << "</text>\n";
    svg << "<text x=\"" << margin - 4 << "\" y=\"" << margin
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ymax) << "</text>\n";

    int color = 0;
    for (const auto& [name, ys] : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << colors[color % 4] << "\" points=\"";
        for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
            svg << px(xs[i]) << ',' << py(ys[i]) << ' ';
        svg << "\"/>\n";
        svg << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16 * color
            << "\" font-size=\"11\" fill=\"" << colors[color % 4] << "\">" << name << "</text>\n";
        ++color;
    }
    svg << "</svg>\n";
    save_text(path, svg.str());
}

} // namespace posetlim
