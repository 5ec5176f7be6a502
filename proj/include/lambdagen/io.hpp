// io.hpp - CSV writers for field histories and derived curves.
//
// Every numeric cell is printed with 17 significant digits in scientific
// notation so repeated runs are byte-identical; undefined values are "nan".

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lambdagen/core.hpp"

namespace lambdagen::io {

class IoError : public Error {
public:
    using Error::Error;
};

std::string format_value(Real v);

/// zeta, tau, re_omega1, im_omega1, re_omega2, im_omega2
void write_fields_csv(const std::filesystem::path& path, const FieldState& field);

/// zeta, transmission, efficiency, adiabaticity_ratio, dark_component_abs
void write_summary_csv(const std::filesystem::path& path, const FieldState& field,
                       const CoherenceProfile& profile, const MediumParams& params);

/// slice_zeta_<value>.csv (tau, intensity1, intensity2) for each zeta,
/// intensities normalized by peak_amplitude^2. Returns the written paths.
std::vector<std::filesystem::path> write_slices(const std::filesystem::path& dir,
                                                const FieldState& field, Real peak_amplitude,
                                                const std::vector<Real>& zetas);

/// zeta, transmission, efficiency: peak normalized intensities per zeta.
void write_peaks_csv(const std::filesystem::path& path, const FieldState& field);

std::string slice_file_name(Real zeta);

}  // namespace lambdagen::io
