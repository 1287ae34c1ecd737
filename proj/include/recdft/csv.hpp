#ifndef RECDFT_CSV_HPP
#define RECDFT_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace recdft {

// Round-trip exact decimal form of a double.
std::string csv_num(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void line(const std::string& text);
    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
};

// Whole file as comma-split rows; blank lines dropped.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace recdft

#endif
