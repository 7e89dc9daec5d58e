#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "ktp/util.hpp"

namespace ktp {

// Line-oriented CSV emission with round-trip float formatting; writers are
// fully deterministic so reruns produce byte-identical files.
class CsvFile {
  public:
    explicit CsvFile(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw NumericError("cannot open output file: " + path);
    }

    void header(const std::string& line) { out_ << line << "\n"; }

    CsvFile& field(double v) {
        sep();
        out_ << format_g17(v);
        return *this;
    }
    CsvFile& field(long v) {
        sep();
        out_ << v;
        return *this;
    }
    CsvFile& field(int v) { return field(static_cast<long>(v)); }

    void endrow() {
        out_ << "\n";
        first_ = true;
    }

  private:
    void sep() {
        if (!first_) out_ << ",";
        first_ = false;
    }
    std::ofstream out_;
    bool first_ = true;
};

}  // namespace ktp
