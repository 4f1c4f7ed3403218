#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectral/densities.hpp"

namespace spz {

enum class BC { DD, NN, DN, ND, PP, DP, DD2 };

std::string bc_name(BC bc);
BC bc_from_name(const std::string& name);

class BasisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// DD/NN/DN/ND/PP act on [-L, L]; dim 2 DD is the rectangle [-L,L]x[-Ly,Ly];
// DP and DD2 live on [-L,L]x[-pi,pi]
struct BasisSpec {
    int dim = 1;
    double L = 0.5;
    double Ly = 0.5;
    BC bc = BC::DD;
};

BasisSpec basis_1d(BC bc, double L);
BasisSpec basis_rectangle(double L, double Ly);
// DP or DD2 on the annulus rectangle for inner radius r
BasisSpec basis_annulus(BC bc, double r);

// 1D: nx is the mode number, u the NN/PP branch (u=1 even/cosine, u=2 odd/sine)
// 2D: (nx, ny), u selects chi (u=1) or phi (u=2) for DP
struct ModeIndex {
    int nx = 1;
    int ny = 0;
    int u = 1;
    bool operator==(const ModeIndex& o) const { return nx == o.nx && ny == o.ny && u == o.u; }
};

bool valid_index(const BasisSpec& b, const ModeIndex& i);
double eigenvalue(const BasisSpec& b, const ModeIndex& i);
double eigenfunction(const BasisSpec& b, const ModeIndex& i, double x, double y = 0.0);

// 1D: the first n nonzero modes in ascending eigenvalue order (zero modes appended first when requested)
// 2D: all index combinations with 1 <= nx <= n and the basis-specific ny range up to n
std::vector<ModeIndex> enumerate_modes(const BasisSpec& b, int n, bool include_zero = false);

enum class Provenance { closed_form, quadrature };
std::string provenance_name(Provenance p);

struct MatrixElement {
    double value = 0.0;
    Provenance provenance = Provenance::quadrature;
};

// <n|Sigma|m>, closed form when the catalog has one for this density/basis pair
MatrixElement matrix_element(const DensitySpec& d, const BasisSpec& b, const ModeIndex& n, const ModeIndex& m);
std::optional<double> matrix_element_closed(const DensitySpec& d, const BasisSpec& b, const ModeIndex& n,
                                            const ModeIndex& m);
double matrix_element_quadrature(const DensitySpec& d, const BasisSpec& b, const ModeIndex& n, const ModeIndex& m);

// <n|W|m> with W = sqrt(-Lap) Sigma^{-1} sqrt(-Lap), 1D DD only
MatrixElement w_matrix_element(const DensitySpec& d, const BasisSpec& b, int n, int m);
double w_matrix_element_quadrature(const DensitySpec& d, const BasisSpec& b, int n, int m);

struct MatrixElementTable {
    BasisSpec basis;
    std::string density_id;
    std::vector<ModeIndex> modes;
    std::vector<double> entries;  // row-major, size N*N
    std::vector<Provenance> provenance;

    int N() const { return static_cast<int>(modes.size()); }
    double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * modes.size() + j]; }
    double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * modes.size() + j]; }
    double eps(int i) const { return eigenvalue(basis, modes[i]); }
    bool is_symmetric(double tol = 0.0) const;
    std::string to_json() const;
    static MatrixElementTable from_json(const std::string& text);
};

struct TableOptions {
    bool force_quadrature = false;
    bool diagonal_only = false;
    int band = -1;          // keep |i-j| <= band, -1 for all
    bool parallel = true;
};

MatrixElementTable build_table(const DensitySpec& d, const BasisSpec& b, const std::vector<ModeIndex>& modes,
                               const TableOptions& opt = {});
MatrixElementTable build_w_table(const DensitySpec& d, const BasisSpec& b, int N, const TableOptions& opt = {});

// 1D tables from cosine moments of the density, for DD/NN/DN/ND bases and large N
MatrixElementTable build_table_moments(const DensitySpec& d, const BasisSpec& b, int N, bool include_zero = false);
// C_k = (1/2L) int Sigma cos(k pi (x+L)/(2L)) dx for k = 0..kmax, composite Gauss-Legendre
std::vector<double> cosine_moments(const DensitySpec& d, int kmax);

}  // namespace spz
