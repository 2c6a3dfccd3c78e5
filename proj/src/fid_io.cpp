#include "chordv/fid_io.hpp"

#include "chordv/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

namespace chordv {

namespace {

std::string_view strip(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double to_number(std::string_view text, std::size_t line_no)
{
    text = strip(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ValidationError("FID file line " + std::to_string(line_no) + ": bad number '" +
                              std::string(text) + "'");
    return v;
}

} // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw ValidationError("cannot format number");
    return std::string(buf.data(), ptr);
}

Fid read_fid(std::istream& in)
{
    std::optional<double> dt;
    bool header_seen = false;
    std::vector<Complex> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = strip(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (view.empty()) continue;
        if (view.front() == '#') {
            view = strip(view.substr(1));
            if (view.starts_with("dt=")) {
                if (header_seen)
                    throw ValidationError("FID file: '# dt=' must precede the data");
                dt = to_number(view.substr(3), line_no);
            }
            continue;
        }
        if (!header_seen) {
            if (view != "index,real,imag")
                throw ValidationError("FID file line " + std::to_string(line_no) +
                                      ": expected header 'index,real,imag'");
            header_seen = true;
            continue;
        }
        const auto c1 = view.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
        if (c2 == std::string_view::npos || view.find(',', c2 + 1) != std::string_view::npos)
            throw ValidationError("FID file line " + std::to_string(line_no) + ": expected 3 fields");
        const double index = to_number(view.substr(0, c1), line_no);
        if (index != static_cast<double>(samples.size()))
            throw ValidationError("FID file line " + std::to_string(line_no) + ": expected index " +
                                  std::to_string(samples.size()));
        samples.emplace_back(to_number(view.substr(c1 + 1, c2 - c1 - 1), line_no),
                             to_number(view.substr(c2 + 1), line_no));
    }
    if (!dt)
        throw ValidationError("FID file: missing '# dt=<seconds>' line");
    if (!header_seen)
        throw ValidationError("FID file: missing 'index,real,imag' header");
    ComplexVector v(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) v[static_cast<Eigen::Index>(i)] = samples[i];
    return Fid(std::move(v), *dt);
}

Fid read_fid(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open FID file '" + path + "'");
    try {
        return read_fid(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void write_fid(const Fid& fid, std::ostream& out)
{
    out << "# dt=" << format_double(fid.dt()) << '\n' << "index,real,imag\n";
    for (Eigen::Index n = 0; n < fid.size(); ++n)
        out << std::to_string(n) << ',' << format_double(fid[n].real()) << ',' << format_double(fid[n].imag()) << '\n';
}

void write_fid(const Fid& fid, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write FID file '" + path + "'");
    write_fid(fid, out);
    out.flush();
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

} // namespace chordv
