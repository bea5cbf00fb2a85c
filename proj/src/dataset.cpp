#include "wdro/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wdro/rng.hpp"

namespace wdro {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_number(const std::string& text, double& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0';
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

EmpiricalDistribution load_dataset(const std::filesystem::path& path, DatasetSchema schema,
                                   const InstanceSpace& space) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open dataset file " + path.string());

    const std::size_t columns =
        static_cast<std::size_t>(space.dimension()) + (schema == DatasetSchema::labeled ? 1 : 0);

    std::vector<Point> points;
    std::string line;
    std::size_t row = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_row(line);
        if (first_data_row) {
            double probe;
            if (!parse_number(trim(fields[0]), probe)) {
                first_data_row = false; // header row
                continue;
            }
            first_data_row = false;
        }
        if (fields.size() != columns)
            throw data_error("row " + std::to_string(row) + ": expected " +
                             std::to_string(columns) + " columns, got " +
                             std::to_string(fields.size()));
        Point z;
        z.features.resize(space.dimension());
        for (int k = 0; k < space.dimension(); ++k) {
            if (!parse_number(trim(fields[static_cast<std::size_t>(k)]), z.features[static_cast<std::size_t>(k)]))
                throw data_error("row " + std::to_string(row) + ": cannot parse field " +
                                 std::to_string(k + 1) + " ('" + trim(fields[static_cast<std::size_t>(k)]) + "')");
        }
        if (schema == DatasetSchema::labeled) {
            double y;
            if (!parse_number(trim(fields.back()), y))
                throw data_error("row " + std::to_string(row) + ": cannot parse label ('" +
                                 trim(fields.back()) + "')");
            z.label = y;
        }
        space.validate(z, "row " + std::to_string(row));
        points.push_back(std::move(z));
    }
    if (points.empty()) throw data_error("empty dataset");
    return EmpiricalDistribution::uniform(std::move(points));
}

void save_dataset(const std::filesystem::path& path, const EmpiricalDistribution& dist,
                  DatasetSchema schema) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open " + path.string() + " for writing");
    char buf[64];
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const Point& z = dist.support[i];
        for (std::size_t k = 0; k < z.features.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", z.features[k]);
            if (k) out << ',';
            out << buf;
        }
        if (schema == DatasetSchema::labeled) {
            if (!z.label) throw data_error("cannot save unlabeled point with labeled schema");
            std::snprintf(buf, sizeof(buf), "%.17g", *z.label);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw data_error("write failure on " + path.string());
}

EmpiricalDistribution sample_uniform_interval(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw data_error("sample size must be at least 1");
    Rng rng(seed);
    std::vector<Point> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(Point::scalar(rng.next_unit()));
    return EmpiricalDistribution::uniform(std::move(points));
}

} // namespace wdro
