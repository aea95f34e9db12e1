// io.hpp — CSV and spectral-snapshot output. Doubles are printed with %.17g
// so identical runs produce byte-identical files.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liewave/fourier.hpp"

namespace liewave {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path,
              const std::vector<std::string>& columns) {
        std::filesystem::create_directories(path.parent_path());
        out_.open(path);
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        write_row(columns);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline nlohmann::ordered_json spectral_to_json(const SpectralField& F) {
    nlohmann::ordered_json modes = nlohmann::ordered_json::array();
    for (std::size_t m = 0; m < F.coeffs.size(); ++m) {
        const Mode& mode = F.group->modes[m];
        nlohmann::ordered_json re = nlohmann::ordered_json::array();
        nlohmann::ordered_json im = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < F.coeffs[m].rows(); ++r) {
            nlohmann::ordered_json rr = nlohmann::ordered_json::array();
            nlohmann::ordered_json ri = nlohmann::ordered_json::array();
            for (Eigen::Index c = 0; c < F.coeffs[m].cols(); ++c) {
                rr.push_back(F.coeffs[m](r, c).real());
                ri.push_back(F.coeffs[m](r, c).imag());
            }
            re.push_back(rr);
            im.push_back(ri);
        }
        modes.push_back({{"index", mode.index},
                         {"dim", mode.dim},
                         {"eigenvalue", mode.eigenvalue},
                         {"re", re},
                         {"im", im}});
    }
    return modes;
}

inline void write_snapshot(const std::filesystem::path& path, double time,
                           const SpectralField& u, const SpectralField& ut) {
    nlohmann::ordered_json j;
    j["time"] = time;
    j["backend"] = u.group->backend_name();
    j["band_limit"] = u.group->spec.band_limit;
    j["u"] = spectral_to_json(u);
    j["ut"] = spectral_to_json(ut);
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << j.dump(1) << '\n';
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << text;
}

} // namespace liewave
