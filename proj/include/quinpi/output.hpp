#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "quinpi/euler.hpp"
#include "quinpi/field.hpp"
#include "quinpi/mesh.hpp"
#include "quinpi/simulation.hpp"

namespace quinpi {

/// One row per cell: id, barycenter, conserved and primitive values,
/// entropy production and order flag. Doubles use the shortest
/// round-trip representation.
void write_field_csv(std::ostream& out, const Mesh& mesh, const Euler& model, const Field& u,
                     const std::vector<double>& production, const std::vector<int>& flags);
void write_field_csv(const std::string& path, const Mesh& mesh, const Euler& model, const Field& u,
                     const std::vector<double>& production, const std::vector<int>& flags);

/// Reads the conserved columns back from a field CSV.
Field read_field_csv(std::istream& in);
Field read_field_csv(const std::string& path);

/// Legacy ASCII VTK unstructured grid with cell data.
void write_vtk(std::ostream& out, const Mesh& mesh, const Euler& model, const Field& u,
               const std::vector<double>& production, const std::vector<int>& flags);
void write_vtk(const std::string& path, const Mesh& mesh, const Euler& model, const Field& u,
               const std::vector<double>& production, const std::vector<int>& flags);

void write_diagnostics_csv(std::ostream& out, const std::vector<StepDiagnostics>& diag);
void write_diagnostics_csv(const std::string& path, const std::vector<StepDiagnostics>& diag);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Shortest representation that reads back to the same double.
std::string format_number(double v);

}  // namespace quinpi
