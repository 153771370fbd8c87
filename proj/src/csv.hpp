#ifndef SURROKIT_CSV_HPP
#define SURROKIT_CSV_HPP

#include <string>
#include <vector>

namespace surrokit::csv {

// Shortest round-trip decimal form of a double (bit-exact on re-parse).
std::string format_double(double v);

double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

Table read(const std::string& path);
void write(const std::string& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows);

} // namespace surrokit::csv

#endif
