#include "dpsw/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dpsw/errors.hpp"

namespace dpsw {

namespace {

[[noreturn]] void ingest_fail(const std::filesystem::path& path, const std::string& why) {
    throw IngestionError("cannot read image " + path.string() + ": " + why);
}

// Skips PNM whitespace and '#' comments; returns the next token.
bool next_token(std::istream& in, std::string& token) {
    token.clear();
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
        } else if (!std::isspace(c)) {
            break;
        }
    }
    if (c == EOF) return false;
    do {
        token.push_back(static_cast<char>(c));
    } while ((c = in.get()) != EOF && !std::isspace(c) && c != '#');
    if (c == '#') in.unget();
    return true;
}

int parse_header_int(std::istream& in, const std::filesystem::path& path, const char* field) {
    std::string token;
    if (!next_token(in, token)) ingest_fail(path, std::string("missing ") + field);
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        ingest_fail(path, std::string("bad ") + field + " '" + token + "'");
    }
}

std::uint8_t luma(int r, int g, int b) {
    return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

std::vector<int> read_ascii_samples(std::istream& in, std::size_t count,
                                    const std::filesystem::path& path, int maxval) {
    std::vector<int> samples;
    samples.reserve(count);
    std::string token;
    while (samples.size() < count) {
        if (!next_token(in, token)) ingest_fail(path, "truncated pixel data");
        try {
            const int v = std::stoi(token);
            if (v < 0 || v > maxval) ingest_fail(path, "sample value out of range");
            samples.push_back(v);
        } catch (const IngestionError&) {
            throw;
        } catch (const std::exception&) {
            ingest_fail(path, "bad sample '" + token + "'");
        }
    }
    return samples;
}

std::vector<std::uint8_t> read_binary_samples(std::istream& in, std::size_t count,
                                              const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) ingest_fail(path, "truncated pixel data");
    return bytes;
}

}  // namespace

Raster load_grayscale(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) ingest_fail(path, "cannot open file");

    std::string magic;
    if (!next_token(in, magic)) ingest_fail(path, "empty file");
    const bool ascii = magic == "P2" || magic == "P3";
    const bool color = magic == "P3" || magic == "P6";
    if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
        ingest_fail(path, "unsupported format '" + magic + "' (PGM/PPM expected)");

    const int width = parse_header_int(in, path, "width");
    const int height = parse_header_int(in, path, "height");
    const int maxval = parse_header_int(in, path, "maxval");
    if (width < 1 || height < 1) ingest_fail(path, "bad dimensions");
    if (maxval < 1) ingest_fail(path, "bad maxval");
    if (maxval > 255)
        throw UnsupportedDepthError("cannot read image " + path.string() + ": maxval " +
                                    std::to_string(maxval) + " exceeds 8-bit depth");

    const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> intensities(pixels);

    if (ascii) {
        const auto samples = read_ascii_samples(in, color ? pixels * 3 : pixels, path, maxval);
        for (std::size_t i = 0; i < pixels; ++i) {
            intensities[i] = color
                                 ? luma(samples[3 * i], samples[3 * i + 1], samples[3 * i + 2])
                                 : static_cast<std::uint8_t>(samples[i]);
        }
    } else {
        // single whitespace byte after maxval, already consumed by next_token's
        // trailing-delimiter read
        const auto bytes = read_binary_samples(in, color ? pixels * 3 : pixels, path);
        for (std::size_t i = 0; i < pixels; ++i) {
            if (color) {
                intensities[i] = luma(bytes[3 * i], bytes[3 * i + 1], bytes[3 * i + 2]);
            } else {
                if (bytes[i] > maxval) ingest_fail(path, "sample value out of range");
                intensities[i] = bytes[i];
            }
        }
    }
    return Raster(width, height, std::move(intensities));
}

void save_pgm(const std::filesystem::path& path, const Raster& raster, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << (binary ? "P5" : "P2") << '\n'
        << raster.width() << ' ' << raster.height() << '\n'
        << "255\n";
    if (binary) {
        out.write(reinterpret_cast<const char*>(raster.intensities().data()),
                  static_cast<std::streamsize>(raster.pixel_count()));
    } else {
        for (int y = 0; y < raster.height(); ++y) {
            for (int x = 0; x < raster.width(); ++x) {
                if (x) out << ' ';
                out << static_cast<int>(raster.at(x, y));
            }
            out << '\n';
        }
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string_view to_string(TextureFamily family) {
    switch (family) {
        case TextureFamily::checker: return "checker";
        case TextureFamily::stripes: return "stripes";
        case TextureFamily::blob_noise: return "blob-noise";
        case TextureFamily::gradient_noise: return "gradient-noise";
    }
    return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

int noise_draw(std::mt19937_64& rng, int amplitude) {
    if (amplitude == 0) return 0;
    return static_cast<int>(rng() % (2 * static_cast<std::uint64_t>(amplitude) + 1)) - amplitude;
}

std::uint8_t clamp_byte(int v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

int positive_mod(int v, int m) {
    return ((v % m) + m) % m;
}

// Two-level band index along the given orientation.
int band(int x, int y, int period, int orientation) {
    int coord;
    switch (orientation) {
        case 0: coord = y; break;
        case 45: coord = x + y; break;
        case 90: coord = x; break;
        default: coord = x - y; break;  // 135
    }
    return positive_mod(coord, 2 * period) / period;
}

double gradient_coord(int x, int y, int w, int h, int orientation) {
    switch (orientation) {
        case 0: return h > 1 ? static_cast<double>(y) / (h - 1) : 0.0;
        case 45: return static_cast<double>(x + y) / (w + h - 2);
        case 90: return w > 1 ? static_cast<double>(x) / (w - 1) : 0.0;
        default: return static_cast<double>(x - y + (h - 1)) / (w + h - 2);  // 135
    }
}

}  // namespace

Raster synth_texture(const SynthSpec& spec) {
    if (spec.width < 8 || spec.height < 8)
        throw std::invalid_argument("synth_texture: size must be at least 8x8");
    if (spec.period < 1) throw std::invalid_argument("synth_texture: period must be >= 1");
    if (spec.amplitude < 0 || spec.amplitude > 128)
        throw std::invalid_argument("synth_texture: noise amplitude must be in [0,128]");
    if (spec.orientation != 0 && spec.orientation != 45 && spec.orientation != 90 &&
        spec.orientation != 135)
        throw std::invalid_argument("synth_texture: orientation must be one of 0/45/90/135");

    std::mt19937_64 rng(spec.seed);
    const int w = spec.width;
    const int h = spec.height;
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h);

    switch (spec.family) {
        case TextureFamily::checker: {
            // seeded phase shift keeps samples of one class from being
            // identical up to noise
            const int ox = static_cast<int>(rng() % (2 * static_cast<unsigned>(spec.period)));
            const int oy = static_cast<int>(rng() % (2 * static_cast<unsigned>(spec.period)));
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const int level =
                        (((x + ox) / spec.period + (y + oy) / spec.period) % 2) ? 176 : 80;
                    pixels[static_cast<std::size_t>(y) * w + x] =
                        clamp_byte(level + noise_draw(rng, spec.amplitude));
                }
            break;
        }
        case TextureFamily::stripes: {
            const int phase = static_cast<int>(rng() % (2 * static_cast<unsigned>(spec.period)));
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const int level =
                        band(x + phase * (spec.orientation == 90),
                             y + phase * (spec.orientation != 90), spec.period,
                             spec.orientation)
                            ? 176
                            : 80;
                    pixels[static_cast<std::size_t>(y) * w + x] =
                        clamp_byte(level + noise_draw(rng, spec.amplitude));
                }
            break;
        }
        case TextureFamily::blob_noise: {
            // random lattice at `period` spacing, bilinear blend, noise on top
            const int cols = w / spec.period + 2;
            const int rows = h / spec.period + 2;
            std::vector<int> lattice(static_cast<std::size_t>(cols) * rows);
            for (int& v : lattice) v = static_cast<int>(rng() % 256);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const int cx = x / spec.period;
                    const int cy = y / spec.period;
                    const double fx = static_cast<double>(x % spec.period) / spec.period;
                    const double fy = static_cast<double>(y % spec.period) / spec.period;
                    const double v00 = lattice[static_cast<std::size_t>(cy) * cols + cx];
                    const double v10 = lattice[static_cast<std::size_t>(cy) * cols + cx + 1];
                    const double v01 = lattice[static_cast<std::size_t>(cy + 1) * cols + cx];
                    const double v11 = lattice[static_cast<std::size_t>(cy + 1) * cols + cx + 1];
                    const double blend = v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) +
                                         v01 * (1 - fx) * fy + v11 * fx * fy;
                    pixels[static_cast<std::size_t>(y) * w + x] =
                        clamp_byte(static_cast<int>(blend + 0.5) +
                                   noise_draw(rng, spec.amplitude));
                }
            break;
        }
        case TextureFamily::gradient_noise: {
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const double ramp = gradient_coord(x, y, w, h, spec.orientation);
                    pixels[static_cast<std::size_t>(y) * w + x] =
                        clamp_byte(static_cast<int>(ramp * 255.0 + 0.5) +
                                   noise_draw(rng, spec.amplitude));
                }
            break;
        }
    }
    return Raster(w, h, std::move(pixels));
}

namespace {

bool has_image_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace

CorpusManifest build_manifest(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        throw IngestionError("corpus root " + root.string() + " is not a directory");

    CorpusManifest manifest;
    manifest.root = root;
    for (const auto& class_entry : std::filesystem::directory_iterator(root)) {
        if (!class_entry.is_directory()) continue;
        const std::string label = class_entry.path().filename().string();
        for (const auto& file_entry : std::filesystem::directory_iterator(class_entry.path())) {
            if (!file_entry.is_regular_file()) continue;  // deeper nesting ignored
            if (!has_image_extension(file_entry.path())) continue;
            manifest.entries.push_back(
                {label + "/" + file_entry.path().filename().string(), label});
        }
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    if (manifest.entries.empty())
        throw IngestionError("empty corpus: no class subdirectories with images under " +
                             root.string());
    return manifest;
}

void write_manifest_csv(const std::filesystem::path& path, const CorpusManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "path,label\n";
    for (const auto& entry : manifest.entries) {
        if (entry.path.find_first_of(",\n") != std::string::npos ||
            entry.label.find_first_of(",\n") != std::string::npos)
            throw std::invalid_argument("manifest entries must not contain commas or newlines");
        out << entry.path << ',' << entry.label << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

CorpusManifest read_manifest_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open manifest " + path.string());
    CorpusManifest manifest;
    manifest.root = path.parent_path();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "path,label")
                throw ParseError(path.string() + ":1: expected header 'path,label'");
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find_last_of(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == line.size())
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected 'path,label'");
        manifest.entries.push_back({line.substr(0, comma), line.substr(comma + 1)});
    }
    if (manifest.entries.empty())
        throw IngestionError("empty corpus: manifest " + path.string() + " lists no images");
    return manifest;
}

namespace {

constexpr std::array<SynthClassSpec, 8> kCorpusClasses{{
    {"checker_fine", TextureFamily::checker, 3, 0, 24},
    {"checker_coarse", TextureFamily::checker, 8, 0, 24},
    {"stripes_h", TextureFamily::stripes, 4, 0, 24},
    {"stripes_d", TextureFamily::stripes, 4, 45, 24},
    {"blob_fine", TextureFamily::blob_noise, 6, 0, 16},
    {"blob_coarse", TextureFamily::blob_noise, 16, 0, 16},
    {"grad_v", TextureFamily::gradient_noise, 1, 0, 40},
    {"grad_d", TextureFamily::gradient_noise, 1, 135, 40},
}};

}  // namespace

std::span<const SynthClassSpec> synth_corpus_classes() {
    return kCorpusClasses;
}

Raster synth_corpus_sample(std::uint64_t corpus_seed, int class_index, int sample_index,
                           int size) {
    if (class_index < 0 || class_index >= static_cast<int>(kCorpusClasses.size()))
        throw std::invalid_argument("synth_corpus_sample: class index out of range");
    if (sample_index < 0) throw std::invalid_argument("synth_corpus_sample: bad sample index");
    const SynthClassSpec& cls = kCorpusClasses[static_cast<std::size_t>(class_index)];
    const std::uint64_t sample_seed =
        splitmix64(splitmix64(corpus_seed ^ (0x100001ULL * (class_index + 1))) ^
                   (0x9001ULL * (sample_index + 1)));
    return synth_texture({cls.family, size, size, cls.period, cls.orientation, cls.amplitude,
                          sample_seed});
}

CorpusManifest generate_synth_corpus(const std::filesystem::path& out_dir, std::uint64_t seed,
                                     int samples_per_class, int size) {
    if (samples_per_class < 1)
        throw std::invalid_argument("generate_synth_corpus: need at least one sample per class");
    std::filesystem::create_directories(out_dir);
    for (int c = 0; c < static_cast<int>(kCorpusClasses.size()); ++c) {
        const auto class_dir = out_dir / std::string(kCorpusClasses[c].name);
        std::filesystem::create_directories(class_dir);
        for (int s = 0; s < samples_per_class; ++s) {
            std::ostringstream name;
            name << "sample_" << (s < 10 ? "0" : "") << s << ".pgm";
            save_pgm(class_dir / name.str(), synth_corpus_sample(seed, c, s, size));
        }
    }
    return build_manifest(out_dir);
}

}  // namespace dpsw
