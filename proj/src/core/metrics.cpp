#include "core/metrics.hpp"

#include "core/common.hpp"
#include "core/png_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace crowdlod {

double mse_rgb(const ImageRGBA& a, const ImageRGBA& b) {
    if (!a.same_size(b)) throw std::invalid_argument("psnr/mse: image dimensions differ");
    const ImageRGBA ca = composite_over(a, 0, 0, 0);
    const ImageRGBA cb = composite_over(b, 0, 0, 0);
    const std::uint8_t* pa = ca.data().data();
    const std::uint8_t* pb = cb.data().data();
    const std::size_t n = std::size_t(a.width()) * a.height();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i, pa += 4, pb += 4) {
        for (int c = 0; c < 3; ++c) {
            const double d = double(pa[c]) - double(pb[c]);
            sum += d * d;
        }
    }
    return sum / (3.0 * double(n));
}

std::optional<double> psnr(const ImageRGBA& a, const ImageRGBA& b) {
    const double mse = mse_rgb(a, b);
    if (mse == 0.0) return std::nullopt;
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

std::vector<double> luminance_601(const ImageRGBA& img) {
    const ImageRGBA c = composite_over(img, 0, 0, 0);
    std::vector<double> y(std::size_t(img.width()) * img.height());
    const std::uint8_t* p = c.data().data();
    for (std::size_t i = 0; i < y.size(); ++i, p += 4)
        y[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    return y;
}

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(size);
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        k[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable valid-mode convolution: output is (w-size+1) x (h-size+1).
std::vector<double> convolve_valid(const std::vector<double>& src, int w, int h,
                                   const std::vector<double>& k, int& out_w, int& out_h) {
    const int size = int(k.size());
    out_w = w - size + 1;
    out_h = h - size + 1;
    std::vector<double> tmp(std::size_t(out_w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double s = 0.0;
            for (int i = 0; i < size; ++i) s += k[i] * src[std::size_t(y) * w + x + i];
            tmp[std::size_t(y) * out_w + x] = s;
        }
    }
    std::vector<double> out(std::size_t(out_w) * out_h);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double s = 0.0;
            for (int i = 0; i < size; ++i) s += k[i] * tmp[std::size_t(y + i) * out_w + x];
            out[std::size_t(y) * out_w + x] = s;
        }
    }
    return out;
}

} // namespace

double ssim(const ImageRGBA& a, const ImageRGBA& b, const SsimParams& params) {
    if (!a.same_size(b)) throw std::invalid_argument("ssim: image dimensions differ");
    if (a.width() < params.window || a.height() < params.window)
        throw std::invalid_argument("ssim: image smaller than window");

    const int w = a.width(), h = a.height();
    const std::vector<double> x = luminance_601(a);
    const std::vector<double> y = luminance_601(b);
    const std::vector<double> kernel = gaussian_kernel(params.window, params.sigma);

    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }

    int ow = 0, oh = 0;
    const std::vector<double> mu_x = convolve_valid(x, w, h, kernel, ow, oh);
    const std::vector<double> mu_y = convolve_valid(y, w, h, kernel, ow, oh);
    const std::vector<double> m_xx = convolve_valid(xx, w, h, kernel, ow, oh);
    const std::vector<double> m_yy = convolve_valid(yy, w, h, kernel, ow, oh);
    const std::vector<double> m_xy = convolve_valid(xy, w, h, kernel, ow, oh);

    const double c1 = params.k1 * params.dynamic_range * params.k1 * params.dynamic_range;
    const double c2 = params.k2 * params.dynamic_range * params.k2 * params.dynamic_range;

    double total = 0.0;
    const std::size_t n = std::size_t(ow) * oh;
    for (std::size_t i = 0; i < n; ++i) {
        const double mx = mu_x[i], my = mu_y[i];
        const double vx = m_xx[i] - mx * mx;
        const double vy = m_yy[i] - my * my;
        const double cov = m_xy[i] - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    return total / double(n);
}

MetricReport compare_sequences(const std::vector<ImageRGBA>& candidate_frames,
                               const std::vector<ImageRGBA>& reference_frames,
                               const std::vector<double>* external_lpips) {
    if (candidate_frames.size() != reference_frames.size())
        throw std::invalid_argument("compare_sequences: frame counts differ");
    if (candidate_frames.empty())
        throw std::invalid_argument("compare_sequences: no frames");
    if (external_lpips && external_lpips->size() != candidate_frames.size())
        throw std::invalid_argument("compare_sequences: LPIPS score count differs from frames");

    MetricReport report;
    report.per_frame.resize(candidate_frames.size());
    parallel_for(candidate_frames.size(), [&](std::size_t i) {
        FrameScore& s = report.per_frame[i];
        s.frame_index = int(i);
        s.psnr_db = psnr(candidate_frames[i], reference_frames[i]);
        s.ssim = ssim(candidate_frames[i], reference_frames[i]);
        if (external_lpips) s.lpips = (*external_lpips)[i];
    });

    double psnr_sum = 0.0, ssim_sum = 0.0, lpips_sum = 0.0;
    int psnr_n = 0;
    for (const FrameScore& s : report.per_frame) {
        if (s.psnr_db) {
            psnr_sum += *s.psnr_db;
            ++psnr_n;
        } else {
            ++report.sentinel_frames;
        }
        ssim_sum += s.ssim;
        if (s.lpips) lpips_sum += *s.lpips;
    }
    if (psnr_n > 0) report.psnr_mean_db = psnr_sum / psnr_n;
    report.ssim_mean = ssim_sum / double(report.per_frame.size());
    if (external_lpips) report.lpips_mean = lpips_sum / double(report.per_frame.size());
    return report;
}

namespace {

std::vector<double> read_lpips_csv(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open LPIPS file: " + path);
    std::vector<std::pair<long, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // skip a header line if present
        if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-') continue;
        std::istringstream ls(line);
        std::string idx_s, val_s;
        if (!std::getline(ls, idx_s, ',') || !std::getline(ls, val_s, ','))
            throw IoError("malformed LPIPS row: " + line);
        rows.emplace_back(std::stol(idx_s), std::stod(val_s));
    }
    if (rows.size() != expected)
        throw std::invalid_argument("LPIPS row count (" + std::to_string(rows.size()) +
                                    ") does not match frame count (" + std::to_string(expected) +
                                    ")");
    std::sort(rows.begin(), rows.end());
    std::vector<double> scores(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        if (rows[i].first != long(i))
            throw std::invalid_argument("LPIPS frame indices must cover 0.." +
                                        std::to_string(expected - 1));
        scores[i] = rows[i].second;
    }
    return scores;
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

} // namespace

MetricReport compare_sequence_dirs(const std::string& candidate_dir,
                                   const std::string& reference_dir, const std::string& lpips_csv,
                                   const std::string& out_prefix) {
    const std::vector<std::string> cand_files = list_frame_pngs(candidate_dir);
    const std::vector<std::string> ref_files = list_frame_pngs(reference_dir);
    if (cand_files.size() != ref_files.size())
        throw std::invalid_argument("frame count mismatch: " + std::to_string(cand_files.size()) +
                                    " vs " + std::to_string(ref_files.size()));
    if (cand_files.empty()) throw std::invalid_argument("no frames found");

    std::vector<ImageRGBA> cand(cand_files.size()), ref(ref_files.size());
    parallel_for(cand_files.size(), [&](std::size_t i) {
        cand[i] = load_png(cand_files[i]);
        ref[i] = load_png(ref_files[i]);
    });

    std::vector<double> lpips;
    const std::vector<double>* lpips_ptr = nullptr;
    if (!lpips_csv.empty()) {
        lpips = read_lpips_csv(lpips_csv, cand.size());
        lpips_ptr = &lpips;
    }

    MetricReport report = compare_sequences(cand, ref, lpips_ptr);

    if (!out_prefix.empty()) {
        std::ofstream txt(out_prefix + ".txt");
        if (!txt) throw IoError("cannot write " + out_prefix + ".txt");
        txt << format_report_text(report);
        std::ofstream csv(out_prefix + ".csv");
        if (!csv) throw IoError("cannot write " + out_prefix + ".csv");
        csv << format_report_csv(report);
    }
    return report;
}

std::string format_report_text(const MetricReport& report) {
    std::ostringstream os;
    os << "frame   psnr_db      ssim     lpips\n";
    for (const FrameScore& s : report.per_frame) {
        char line[128];
        std::snprintf(line, sizeof line, "%5d  %8s  %8s  %8s\n", s.frame_index,
                      s.psnr_db ? fmt(*s.psnr_db).c_str() : "ident",
                      fmt(s.ssim).c_str(), s.lpips ? fmt(*s.lpips).c_str() : "-");
        os << line;
    }
    os << "\nmean psnr : "
       << (report.psnr_mean_db ? fmt(*report.psnr_mean_db) + " dB" : std::string("identical"));
    if (report.sentinel_frames > 0)
        os << "  (" << report.sentinel_frames << " identical frame(s) excluded)";
    os << "\nmean ssim : " << fmt(report.ssim_mean);
    if (report.lpips_mean) os << "\nmean lpips: " << fmt(*report.lpips_mean);
    os << "\n";
    return os.str();
}

std::string format_report_csv(const MetricReport& report) {
    std::ostringstream os;
    os << "frame_index,psnr_db,ssim,lpips,identical\n";
    for (const FrameScore& s : report.per_frame) {
        os << s.frame_index << ',';
        if (s.psnr_db) os << fmt(*s.psnr_db, 6);
        os << ',' << fmt(s.ssim, 6) << ',';
        if (s.lpips) os << fmt(*s.lpips, 6);
        os << ',' << (s.psnr_db ? 0 : 1) << '\n';
    }
    os << "mean,";
    if (report.psnr_mean_db) os << fmt(*report.psnr_mean_db, 6);
    os << ',' << fmt(report.ssim_mean, 6) << ',';
    if (report.lpips_mean) os << fmt(*report.lpips_mean, 6);
    os << ',' << report.sentinel_frames << '\n';
    return os.str();
}

bool closer_agreement(const MetricSummary& a, const MetricSummary& b) {
    const bool no_worse = a.psnr_db >= b.psnr_db && a.ssim >= b.ssim && a.lpips <= b.lpips;
    const bool strictly = a.psnr_db > b.psnr_db || a.ssim > b.ssim || a.lpips < b.lpips;
    return no_worse && strictly;
}

} // namespace crowdlod
