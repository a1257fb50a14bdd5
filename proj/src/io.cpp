#include "tds/io.hpp"

#include "tds/errors.hpp"

#include <cctype>
#include <cfenv>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tds {

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void dump(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write to " + path.string() + " failed");
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

struct Token {
    std::string_view text;
    long column;  // 1-based
};

std::vector<Token> split_line(std::string_view line) {
    std::vector<Token> out;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && is_space(line[k])) ++k;
        const std::size_t start = k;
        while (k < line.size() && !is_space(line[k])) ++k;
        if (k > start) out.push_back({line.substr(start, k - start), static_cast<long>(start + 1)});
    }
    return out;
}

double parse_value(const Token& t, long line) {
    double v = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range) {
        // from_chars reports overflow and underflow alike; underflow is a legitimate tiny value
        const double approx = std::strtod(std::string(t.text).c_str(), nullptr);
        if (!std::isfinite(approx) || std::abs(approx) > 1.0) {
            throw ParseError("non-finite value '" + std::string(t.text) + "' at line " +
                                 std::to_string(line) + ", column " + std::to_string(t.column),
                             line, t.column);
        }
        return approx;
    }
    if (ec != std::errc() || ptr != last) {
        throw ParseError("malformed number '" + std::string(t.text) + "' at line " +
                             std::to_string(line) + ", column " + std::to_string(t.column),
                         line, t.column);
    }
    if (!std::isfinite(v)) {
        throw ParseError("non-finite value '" + std::string(t.text) + "' at line " +
                             std::to_string(line) + ", column " + std::to_string(t.column),
                         line, t.column);
    }
    return v;
}

std::size_t parse_dim(const Token& t, long line) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || v == 0) {
        throw ParseError("bad dimension '" + std::string(t.text) + "' in header at line " +
                             std::to_string(line) + ", column " + std::to_string(t.column),
                         line, t.column);
    }
    return v;
}

}  // namespace

std::string render_matrix(const Grid& g) {
    std::string out = "tds-matrix v1 " + std::to_string(g.rows()) + " " + std::to_string(g.cols()) + "\n";
    char buf[64];
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const int len = std::snprintf(buf, sizeof buf, "%.17g", g(i, j));
            if (j) out.push_back(' ');
            out.append(buf, static_cast<std::size_t>(len));
        }
        out.push_back('\n');
    }
    return out;
}

Grid parse_matrix(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.empty()) throw ParseError("empty matrix file: missing header", 1, 1);

    const auto header = split_line(lines[0]);
    if (header.size() != 4 || header[0].text != "tds-matrix" || header[1].text != "v1") {
        throw ParseError("malformed header at line 1: expected 'tds-matrix v1 <rows> <cols>'", 1, 1);
    }
    const std::size_t rows = parse_dim(header[2], 1);
    const std::size_t cols = parse_dim(header[3], 1);

    std::vector<double> values;
    values.reserve(rows * cols);
    std::size_t row = 0;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const long line_no = static_cast<long>(li + 1);
        const auto tokens = split_line(lines[li]);
        if (tokens.empty()) continue;  // blank lines (e.g. trailing) are ignored
        if (row == rows) {
            throw ParseError("count mismatch at line " + std::to_string(line_no) + ": header declares " +
                                 std::to_string(rows) + " rows but more data follows",
                             line_no, tokens.front().column);
        }
        if (tokens.size() != cols) {
            throw ParseError("count mismatch at line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(cols) + " values, got " + std::to_string(tokens.size()),
                             line_no, 1);
        }
        for (const Token& t : tokens) values.push_back(parse_value(t, line_no));
        ++row;
    }
    if (row != rows) {
        const long line_no = static_cast<long>(lines.size());
        throw ParseError("count mismatch at line " + std::to_string(line_no) + ": header declares " +
                             std::to_string(rows) + " rows, found " + std::to_string(row),
                         line_no, 1);
    }
    return Grid(rows, cols, std::move(values));
}

void write_matrix(const Grid& g, const std::filesystem::path& path) { dump(path, render_matrix(g)); }

Grid read_matrix(const std::filesystem::path& path) { return parse_matrix(slurp(path)); }

std::string encode_pgm(const Grid& g, std::uint32_t maxval, bool clamp) {
    if (maxval == 0 || maxval > 65535) throw ParameterError("PGM maxval must lie in [1, 65535]");
    std::string out = "P5\n" + std::to_string(g.cols()) + " " + std::to_string(g.rows()) + "\n" +
                      std::to_string(maxval) + "\n";
    const bool wide = maxval > 255;
    out.reserve(out.size() + g.size() * (wide ? 2 : 1));

    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);
    for (std::size_t k = 0; k < g.size(); ++k) {
        double v = g.values()[k];
        if (v < 0.0 || v > 1.0) {
            if (!clamp) {
                std::fesetround(saved);
                std::ostringstream os;
                os << "pixel " << k << " = " << v << " outside [0, 1]";
                throw DataError(os.str());
            }
            v = v < 0.0 ? 0.0 : 1.0;
        }
        // nearbyint under FE_TONEAREST rounds half to even
        const auto s = static_cast<std::uint32_t>(std::nearbyint(v * static_cast<double>(maxval)));
        if (wide) out.push_back(static_cast<char>((s >> 8) & 0xFF));
        out.push_back(static_cast<char>(s & 0xFF));
    }
    std::fesetround(saved);
    return out;
}

PgmImage decode_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ParseError("bad PGM magic: expected P5");
    }
    std::size_t pos = 2;
    auto skip_ws = [&] {
        for (;;) {
            while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            return;
        }
    };
    auto read_uint = [&](const char* what) {
        skip_ws();
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), v);
        if (ec != std::errc() || v == 0) throw ParseError(std::string("bad PGM ") + what);
        pos = static_cast<std::size_t>(ptr - bytes.data());
        return v;
    };
    const std::uint64_t width = read_uint("width");
    const std::uint64_t height = read_uint("height");
    const std::uint64_t maxval = read_uint("maxval");
    if (maxval > 65535) throw ParseError("bad PGM maxval");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw ParseError("truncated PGM header");
    }
    ++pos;  // exactly one whitespace byte before the raster

    const std::size_t bps = maxval > 255 ? 2 : 1;
    const std::size_t need = static_cast<std::size_t>(width * height) * bps;
    if (bytes.size() - pos < need) {
        throw ParseError("truncated PGM payload: need " + std::to_string(need) + " bytes, have " +
                         std::to_string(bytes.size() - pos));
    }
    std::vector<double> v(static_cast<std::size_t>(width * height));
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::uint32_t s = bps == 2 ? (std::uint32_t{p[2 * k]} << 8) | p[2 * k + 1] : p[k];
        if (s > maxval) throw ParseError("PGM sample exceeds maxval");
        v[k] = static_cast<double>(s) / static_cast<double>(maxval);
    }
    return PgmImage{Grid(static_cast<std::size_t>(height), static_cast<std::size_t>(width), std::move(v)),
                    static_cast<std::uint32_t>(maxval)};
}

void write_pgm(const Grid& g, const std::filesystem::path& path, std::uint32_t maxval, bool clamp) {
    dump(path, encode_pgm(g, maxval, clamp));
}

PgmImage read_pgm(const std::filesystem::path& path) { return decode_pgm(slurp(path)); }

bool looks_like_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[2] = {};
    in.read(magic, 2);
    return in.gcount() == 2 && magic[0] == 'P' && magic[1] == '5';
}

Grid read_grid(const std::filesystem::path& path) {
    if (looks_like_pgm(path)) return read_pgm(path).pixels;
    return read_matrix(path);
}

}  // namespace tds
