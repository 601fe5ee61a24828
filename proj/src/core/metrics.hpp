#pragma once

#include "core/image.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crowdlod {

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
};

// Mean squared difference over all pixels and the three color channels
// jointly, after compositing both images over black.
double mse_rgb(const ImageRGBA& a, const ImageRGBA& b);

// 10*log10(255^2 / MSE) in dB. nullopt is the "identical" sentinel (MSE = 0).
std::optional<double> psnr(const ImageRGBA& a, const ImageRGBA& b);

// Mean local SSIM over a sliding Gaussian window on Rec.601 luminance,
// valid-window coverage only. Both dimensions must be >= params.window.
double ssim(const ImageRGBA& a, const ImageRGBA& b, const SsimParams& params = {});

struct FrameScore {
    int frame_index = 0;
    std::optional<double> psnr_db; // nullopt = identical-frames sentinel
    double ssim = 0.0;
    std::optional<double> lpips;
};

struct MetricReport {
    std::vector<FrameScore> per_frame;
    std::optional<double> psnr_mean_db; // over non-sentinel frames; nullopt if none
    double ssim_mean = 0.0;
    std::optional<double> lpips_mean;
    int sentinel_frames = 0; // frames excluded from the PSNR mean
};

// Scores candidate frames against reference frames pairwise. external_lpips,
// when present, must have one score per frame.
MetricReport compare_sequences(const std::vector<ImageRGBA>& candidate_frames,
                               const std::vector<ImageRGBA>& reference_frames,
                               const std::vector<double>* external_lpips = nullptr);

// Directory front end: reads numbered PNG frames from two directories (paired
// in ascending filename-number order) and an optional CSV of
// (frame_index,lpips) rows. Writes <out_prefix>.txt and <out_prefix>.csv.
MetricReport compare_sequence_dirs(const std::string& candidate_dir,
                                   const std::string& reference_dir,
                                   const std::string& lpips_csv, // empty = none
                                   const std::string& out_prefix);

std::string format_report_text(const MetricReport& report);
std::string format_report_csv(const MetricReport& report);

// Summary triple in Table-style reporting. Higher PSNR/SSIM and lower LPIPS
// indicate closer agreement with the reference.
struct MetricSummary {
    double psnr_db = 0.0;
    double ssim = 0.0;
    double lpips = 0.0;
};

// True when `a` is at least as close as `b` on every metric and strictly
// closer on at least one.
bool closer_agreement(const MetricSummary& a, const MetricSummary& b);

} // namespace crowdlod
