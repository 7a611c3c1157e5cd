#ifndef VMM_TABLE_IO_HPP
#define VMM_TABLE_IO_HPP

#include <string>
#include <vector>

#include "vmm/diagnostics.hpp"
#include "vmm/study.hpp"

namespace vmm {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

/// CSV with the fixed header eps,h,l2_err,l2_order,h1_err,h1_order,lap_err,
/// lap_order; order fields are blank where undefined. Written atomically
/// (temp file + rename); identical tables produce identical bytes.
void write_table(const ConvergenceTable& table, const std::string& path);
ConvergenceTable read_table(const std::string& path);

/// CSV rows x,y,u_h,u_exact,err,lap_err over a uniform grid clipped to the
/// mesh; grid points outside the mesh are omitted. Without an exact bundle
/// the comparison columns stay empty.
void write_field(const SolutionField& field, const ExactBundle* exact,
                 int grid_resolution, const std::string& path);

/// CSV with header eps,h,ndofs,c_h,adjoint.
void write_cz_reports(const std::vector<CZReport>& reports, const std::string& path);

/// Writes content to path via a temp file and rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace vmm

#endif
