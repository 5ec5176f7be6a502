#include "lambdagen/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lambdagen/analysis.hpp"
#include "lambdagen/analytic.hpp"

namespace lambdagen::io {

namespace {

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path)
    {
        if (!out_)
            throw IoError("cannot open '" + path.string() + "' for writing");
        buffer_.reserve(1 << 16);
    }

    void header(std::initializer_list<const char*> names)
    {
        bool first = true;
        for (const char* n : names) {
            if (!first)
                buffer_ += ',';
            buffer_ += n;
            first = false;
        }
        buffer_ += "\r\n";
    }

    template <typename... Values>
    void row(Values... values)
    {
        bool first = true;
        ((append(values, first)), ...);
        buffer_ += "\r\n";
        if (buffer_.size() > (1 << 15))
            flush();
    }

    void close()
    {
        flush();
        out_.close();
        if (!out_)
            throw IoError("failed writing '" + path_.string() + "'");
    }

private:
    void append(Real v, bool& first)
    {
        if (!first)
            buffer_ += ',';
        buffer_ += format_value(v);
        first = false;
    }

    void flush()
    {
        out_ << buffer_;
        buffer_.clear();
        if (!out_)
            throw IoError("failed writing '" + path_.string() + "'");
    }

    std::filesystem::path path_;
    std::ofstream out_;
    std::string buffer_;
};

Real peak_or_nan(const Eigen::RowVectorXd& row, Real norm)
{
    return norm > 0.0 ? row.maxCoeff() / norm : std::nan("");
}

}  // namespace

std::string format_value(Real v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v == 0.0 ? 0.0 : v);
    return buf;
}

void write_fields_csv(const std::filesystem::path& path, const FieldState& field)
{
    CsvWriter w(path);
    w.header({"zeta", "tau", "re_omega1", "im_omega1", "re_omega2", "im_omega2"});
    for (Eigen::Index i = 0; i < field.zeta_count(); ++i)
        for (Eigen::Index k = 0; k < field.tau_count(); ++k) {
            const Complex o1 = field.omega1(i, k);
            const Complex o2 = field.omega2(i, k);
            w.row(field.zeta_grid[i], field.tau_grid[k], o1.real(), o1.imag(), o2.real(),
                  o2.imag());
        }
    w.close();
}

void write_summary_csv(const std::filesystem::path& path, const FieldState& field,
                       const CoherenceProfile& profile, const MediumParams& params)
{
    const Real entrance = field.omega1.row(0).cwiseAbs2().maxCoeff();

    Eigen::VectorXd ratio = Eigen::VectorXd::Constant(field.zeta_count(), std::nan(""));
    try {
        ratio = analytic::adiabaticity_ratio(profile, params, field.zeta_grid).ratio;
    } catch (const Error&) {
        // unequal propagation constants or alpha undefined: leave as nan
    }
    const Eigen::VectorXcd dark = analysis::dark_component_trace(field, profile);

    CsvWriter w(path);
    w.header({"zeta", "transmission", "efficiency", "adiabaticity_ratio", "dark_component_abs"});
    for (Eigen::Index i = 0; i < field.zeta_count(); ++i)
        w.row(field.zeta_grid[i], peak_or_nan(field.omega1.row(i).cwiseAbs2(), entrance),
              peak_or_nan(field.omega2.row(i).cwiseAbs2(), entrance), ratio[i],
              std::abs(dark[i]));
    w.close();
}

std::string slice_file_name(Real zeta)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "slice_zeta_%g.csv", zeta);
    return buf;
}

std::vector<std::filesystem::path> write_slices(const std::filesystem::path& dir,
                                                const FieldState& field, Real peak_amplitude,
                                                const std::vector<Real>& zetas)
{
    const Real norm = peak_amplitude * peak_amplitude;
    std::vector<std::filesystem::path> written;
    for (Real z : zetas) {
        const Eigen::Index i = field.zeta_index(z);
        const auto path = dir / slice_file_name(z);
        CsvWriter w(path);
        w.header({"tau", "intensity1", "intensity2"});
        for (Eigen::Index k = 0; k < field.tau_count(); ++k) {
            const Real i1 = std::norm(field.omega1(i, k));
            const Real i2 = std::norm(field.omega2(i, k));
            w.row(field.tau_grid[k], norm > 0.0 ? i1 / norm : std::nan(""),
                  norm > 0.0 ? i2 / norm : std::nan(""));
        }
        w.close();
        written.push_back(path);
    }
    return written;
}

void write_peaks_csv(const std::filesystem::path& path, const FieldState& field)
{
    const Real entrance = field.omega1.row(0).cwiseAbs2().maxCoeff();
    CsvWriter w(path);
    w.header({"zeta", "transmission", "efficiency"});
    for (Eigen::Index i = 0; i < field.zeta_count(); ++i)
        w.row(field.zeta_grid[i], peak_or_nan(field.omega1.row(i).cwiseAbs2(), entrance),
              peak_or_nan(field.omega2.row(i).cwiseAbs2(), entrance));
    w.close();
}

}  // namespace lambdagen::io
