#pragma once

#include "nsoc/optimize.hpp"
#include "nsoc/stationarity.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace nsoc {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid header `# nx,ny,hx,hy,x0,y0` followed by ny rows of nx values, 17 significant digits.
std::string field_to_csv(const Field& f);
/// Parses field_to_csv output; the header must describe `grid`.
Field field_from_csv(const std::string& text, const GridPtr& grid);
/// Grid described by a field CSV header.
GridPtr grid_from_csv(const std::string& text);

/// Same header, then one value per line in perimeter order.
std::string boundary_to_csv(const BoundaryField& f);
BoundaryField boundary_from_csv(const std::string& text, const GridPtr& grid);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

void write_field_csv(const std::filesystem::path& path, const Field& f);
Field read_field_csv(const std::filesystem::path& path, const GridPtr& grid);
void write_boundary_csv(const std::filesystem::path& path, const BoundaryField& f);
BoundaryField read_boundary_csv(const std::filesystem::path& path, const GridPtr& grid);

/// Legacy VTK STRUCTURED_POINTS with one scalar point array.
std::string field_to_vtk(const Field& f, const std::string& name);

/// eps,rho,probe_id,err_h1,err_max,degenerate_flag
std::string limit_table_csv(const std::vector<LimitRow>& rows);
std::string trace_csv(const std::vector<TraceRow>& rows);

Json to_json(const SolveReport& r);
Json to_json(const BStationarity& b);
Json to_json(const StrongRecord& s);
Json to_json(const MultiplierRecord& m);
Json to_json(const BoundCaseRecord& b);
Json to_json(const AppendixRecord& a);
Json to_json(const EquivalenceVerdict& e);
Json to_json(const StationarityReport& r);
Json to_json(const std::vector<LimitRow>& rows);
Json to_json(const std::vector<TraceRow>& rows);
/// min, max and the node values.
Json field_summary(const Field& f, bool with_values);

}  // namespace nsoc
