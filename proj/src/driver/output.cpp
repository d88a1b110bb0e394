#include "quinpi/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "quinpi/errors.hpp"

namespace quinpi {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void check_written(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& out, const Mesh& mesh, const Euler& model, const Field& u,
                     const std::vector<double>& production, const std::vector<int>& flags) {
  out << "cell,x,y,rho,rho_u,rho_v,E,u,v,p,entropy_production,order\n";
  for (int i = 0; i < mesh.num_cells(); ++i) {
    const Vec2 c = mesh.cells[i].barycenter;
    const double* ui = u.cell(i);
    out << i << ',' << format_number(c.x) << ',' << format_number(c.y);
    for (int k = 0; k < 4; ++k) out << ',' << format_number(ui[k]);
    if (model.admissible(ui)) {
      const Primitive w = model.to_primitive(ui);
      out << ',' << format_number(w.u) << ',' << format_number(w.v) << ',' << format_number(w.p);
    } else {
      out << ",nan,nan,nan";
    }
    out << ',' << format_number(i < static_cast<int>(production.size()) ? production[i] : 0.0) << ','
        << (i < static_cast<int>(flags.size()) ? flags[i] : 3) << '\n';
  }
}

void write_field_csv(const std::string& path, const Mesh& mesh, const Euler& model, const Field& u,
                     const std::vector<double>& production, const std::vector<int>& flags) {
  std::ofstream out = open_out(path);
  write_field_csv(out, mesh, model, u, production, flags);
  check_written(out, path);
}

Field read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("field csv: missing header");
  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (int col = 0; col < 7 && std::getline(ss, cell, ','); ++col) {
      if (col < 3) continue;
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc()) throw ParseError("field csv: bad number '" + cell + "' on row " + std::to_string(rows + 1));
      values.push_back(v);
    }
    ++rows;
  }
  Field u(4, rows);
  if (values.size() != u.size()) throw ParseError("field csv: incomplete rows");
  u.data = std::move(values);
  return u;
}

Field read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_field_csv(in);
}

void write_vtk(std::ostream& out, const Mesh& mesh, const Euler& model, const Field& u,
               const std::vector<double>& production, const std::vector<int>& flags) {
  // Points are written per cell so periodic images stay where the cell is.
  std::size_t npoints = 0;
  for (const Cell& c : mesh.cells) npoints += c.vertices.size();
  out << "# vtk DataFile Version 3.0\nquinpi field\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << npoints << " double\n";
  for (const Cell& c : mesh.cells)
    for (int v : c.vertices) out << format_number(mesh.vertices[v].x) << ' ' << format_number(mesh.vertices[v].y) << " 0\n";
  out << "CELLS " << mesh.num_cells() << ' ' << npoints + mesh.cells.size() << '\n';
  std::size_t next = 0;
  for (const Cell& c : mesh.cells) {
    out << c.vertices.size();
    for (std::size_t k = 0; k < c.vertices.size(); ++k) out << ' ' << next++;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (const Cell& c : mesh.cells) out << (c.vertices.size() == 3 ? 5 : c.vertices.size() == 4 ? 9 : 7) << '\n';
  out << "CELL_DATA " << mesh.num_cells() << '\n';
  const char* names[4] = {"rho", "rho_u", "rho_v", "E"};
  for (int k = 0; k < 4; ++k) {
    out << "SCALARS " << names[k] << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < mesh.num_cells(); ++i) out << format_number(u(i, k)) << '\n';
  }
  out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.num_cells(); ++i)
    out << format_number(model.admissible(u.cell(i)) ? model.pressure(u.cell(i)) : std::nan("")) << '\n';
  out << "SCALARS entropy_production double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.num_cells(); ++i)
    out << format_number(i < static_cast<int>(production.size()) ? production[i] : 0.0) << '\n';
  out << "SCALARS order int 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.num_cells(); ++i) out << (i < static_cast<int>(flags.size()) ? flags[i] : 3) << '\n';
}

void write_vtk(const std::string& path, const Mesh& mesh, const Euler& model, const Field& u,
               const std::vector<double>& production, const std::vector<int>& flags) {
  std::ofstream out = open_out(path);
  write_vtk(out, mesh, model, u, production, flags);
  check_written(out, path);
}

void write_diagnostics_csv(std::ostream& out, const std::vector<StepDiagnostics>& diag) {
  out << "step,t,dt,dt_stab,c_as,rejections,pred_newton_1,pred_newton_2,pred_newton_3,corr_newton_1,"
         "corr_newton_2,corr_newton_3,linear_iterations,limiter_sweeps,cells_order2,cells_order1,max_entropy_production\n";
  for (const StepDiagnostics& d : diag) {
    out << d.step << ',' << format_number(d.t) << ',' << format_number(d.dt) << ',' << format_number(d.dt_stab) << ','
        << format_number(d.c_as) << ',' << d.rejections;
    for (int v : d.predictor_newton) out << ',' << v;
    for (int v : d.corrector_newton) out << ',' << v;
    out << ',' << d.linear_iterations << ',' << d.limiter_sweeps << ',' << d.cells_order2 << ',' << d.cells_order1
        << ',' << format_number(d.max_entropy_production) << '\n';
  }
}

void write_diagnostics_csv(const std::string& path, const std::vector<StepDiagnostics>& diag) {
  std::ofstream out = open_out(path);
  write_diagnostics_csv(out, diag);
  check_written(out, path);
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "cells,h,L1,rate_L1,Linf,rate_Linf,seconds\n";
  for (const ConvergenceRow& r : rows) {
    out << r.cells << ',' << format_number(r.h) << ',' << format_number(r.density.l1) << ','
        << (std::isnan(r.rate_l1) ? std::string("") : format_number(r.rate_l1)) << ','
        << format_number(r.density.linf) << ','
        << (std::isnan(r.rate_linf) ? std::string("") : format_number(r.rate_linf)) << ','
        << format_number(r.seconds) << '\n';
  }
}

}  // namespace quinpi
