#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dpsw/raster.hpp"

namespace dpsw {

/// Loads a PNM image (PGM P2/P5 natively, PPM P3/P6 via integer luma) as an
/// 8-bit grayscale raster. maxval must be 255 or less; deeper samples raise
/// UnsupportedDepthError. Any read failure raises IngestionError naming the
/// path, and never yields a partial raster.
Raster load_grayscale(const std::filesystem::path& path);

/// Writes a PGM, maxval 255. Binary (P5) round-trips bit-exactly; `binary =
/// false` writes ASCII P2.
void save_pgm(const std::filesystem::path& path, const Raster& raster, bool binary = true);

enum class TextureFamily { checker, stripes, blob_noise, gradient_noise };

std::string_view to_string(TextureFamily family);

/// Recipe for one deterministic synthetic texture. `orientation` is in
/// degrees from {0, 45, 90, 135}; `amplitude` is the half-range of the
/// additive pixel noise.
struct SynthSpec {
    TextureFamily family;
    int width;
    int height;
    int period;
    int orientation;
    int amplitude;
    std::uint64_t seed;
};

Raster synth_texture(const SynthSpec& spec);

struct ManifestEntry {
    std::string path;  ///< relative to the manifest root
    std::string label;
};

struct CorpusManifest {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;

    std::filesystem::path resolve(const ManifestEntry& entry) const { return root / entry.path; }
};

/// One class per immediate subdirectory of root; image files (.pgm/.ppm/.pnm)
/// directly inside each class directory, entries sorted by path. Files nested
/// deeper than one level are ignored.
CorpusManifest build_manifest(const std::filesystem::path& root);

/// CSV `path,label`, one entry per line.
void write_manifest_csv(const std::filesystem::path& path, const CorpusManifest& manifest);
CorpusManifest read_manifest_csv(const std::filesystem::path& path);

/// The canonical 8-class desk-scale corpus: class definitions and sample
/// synthesis. Each sample differs by a seeded phase offset and noise draw.
struct SynthClassSpec {
    std::string_view name;
    TextureFamily family;
    int period;
    int orientation;
    int amplitude;
};

std::span<const SynthClassSpec> synth_corpus_classes();

/// Deterministic sample `sample_index` of class `class_index` for a corpus seed.
Raster synth_corpus_sample(std::uint64_t corpus_seed, int class_index, int sample_index, int size);

/// Writes the full corpus (one subdirectory per class, PGM samples) under
/// out_dir and returns its manifest.
CorpusManifest generate_synth_corpus(const std::filesystem::path& out_dir, std::uint64_t seed,
                                     int samples_per_class = 10, int size = 64);

}  // namespace dpsw
