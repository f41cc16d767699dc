#include "floatchain/circuit_model.hpp"

#include "floatchain/errors.hpp"
#include "floatchain/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace floatchain {

std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::AB: return "AB";
    case Scheme::AA: return "AA";
    case Scheme::SingleEnded: return "SingleEnded";
    }
    return "?";
}

Scheme scheme_from_string(std::string_view s) {
    if (s == "AB" || s == "A-B" || s == "ab") return Scheme::AB;
    if (s == "AA" || s == "A-A" || s == "aa") return Scheme::AA;
    if (s == "SingleEnded" || s == "single-ended" || s == "single_ended") return Scheme::SingleEnded;
    throw ValidationError("unknown coupling scheme '" + std::string(s) + "' (expected AB, AA or SingleEnded)",
                          "scheme");
}

void ChainSpec::validate() const {
    if (n_qubits < 1) throw ValidationError("n_qubits must be >= 1", "n");
    auto nonneg = [](double v, const char* field) {
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError(std::string(field) + " must be a finite, nonnegative capacitance", field);
    };
    nonneg(c_q, "c_q");
    nonneg(c_g, "c_g");
    nonneg(c_c, "c_c");
    nonneg(c_sh, "c_sh");
    if (scheme == Scheme::SingleEnded) {
        if (!(c_sh > 0.0)) throw ValidationError("single-ended chains require c_sh > 0", "c_sh");
        if (c_q != 0.0 || c_g != 0.0)
            throw ValidationError("c_q and c_g are unused for single-ended chains and must be zero or absent",
                                  c_q != 0.0 ? "c_q" : "c_g");
    } else {
        if (!(c_q > 0.0)) throw ValidationError("floating chains require c_q > 0", "c_q");
    }
}

std::string NodeLabel::str() const {
    std::string s = "q" + std::to_string(qubit);
    if (pad == Pad::A) s += 'a';
    else if (pad == Pad::B) s += 'b';
    return s;
}

NodeLabel NodeLabel::parse(std::string_view text) {
    auto bad = [&] {
        return ParseError("node label '" + std::string(text) + "' is not of the form q<i>a, q<i>b or q<i>",
                          std::string(text));
    };
    if (text.size() < 2 || (text[0] != 'q' && text[0] != 'Q')) throw bad();
    std::string_view rest = text.substr(1);
    NodeLabel label;
    label.pad = Pad::Grounded;
    char last = rest.back();
    if (last == 'a' || last == 'A') {
        label.pad = Pad::A;
        rest.remove_suffix(1);
    } else if (last == 'b' || last == 'B') {
        label.pad = Pad::B;
        rest.remove_suffix(1);
    }
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), index);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || index < 1) throw bad();
    label.qubit = index;
    return label;
}

Matrix BlockCapacitanceMatrix::assembled() const {
    const auto n = cpp.rows();
    Matrix full(2 * n, 2 * n);
    full.topLeftCorner(n, n) = cpp;
    full.topRightCorner(n, n) = cpm;
    full.bottomLeftCorner(n, n) = cpm.transpose();
    full.bottomRightCorner(n, n) = cmm;
    return full;
}

namespace {

void stamp(Matrix& m, Eigen::Index p, Eigen::Index q, double c) {
    m(p, p) += c;
    m(q, q) += c;
    m(p, q) -= c;
    m(q, p) -= c;
}

} // namespace

NodeCapacitanceMatrix build_node_matrix(const ChainSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.n_qubits);
    NodeCapacitanceMatrix out;

    if (spec.scheme == Scheme::SingleEnded) {
        out.matrix = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            out.labels.push_back({static_cast<std::size_t>(i + 1), Pad::Grounded});
            out.matrix(i, i) += spec.c_sh;
        }
        for (Eigen::Index i = 0; i + 1 < n; ++i) stamp(out.matrix, i, i + 1, spec.c_c);
        return out;
    }

    // node 2i is pad a of qubit i, node 2i+1 is pad b
    out.matrix = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.labels.push_back({static_cast<std::size_t>(i + 1), Pad::A});
        out.labels.push_back({static_cast<std::size_t>(i + 1), Pad::B});
        stamp(out.matrix, 2 * i, 2 * i + 1, spec.c_q);
        out.matrix(2 * i, 2 * i) += spec.c_g;
        out.matrix(2 * i + 1, 2 * i + 1) += spec.c_g;
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::Index left = 2 * i + 1; // b_i
        const Eigen::Index right = spec.scheme == Scheme::AB ? 2 * (i + 1) : 2 * (i + 1) + 1;
        stamp(out.matrix, left, right, spec.c_c);
    }
    return out;
}

BlockCapacitanceMatrix node_to_pm(const NodeCapacitanceMatrix& node) {
    const auto size = static_cast<Eigen::Index>(node.labels.size());
    if (node.matrix.rows() != size || node.matrix.cols() != size)
        throw ValidationError("node matrix dimension does not match its label count", "matrix");
    if (size == 0 || size % 2 != 0)
        throw ValidationError("a/b paired node matrix needs an even, nonzero node count; got " +
                                  std::to_string(size),
                              "labels");
    const Eigen::Index n = size / 2;

    std::vector<Eigen::Index> pad_a(n, -1), pad_b(n, -1);
    for (Eigen::Index k = 0; k < size; ++k) {
        const auto& label = node.labels[k];
        if (label.pad == Pad::Grounded || label.qubit < 1 || label.qubit > static_cast<std::size_t>(n))
            throw ValidationError("node '" + label.str() + "' cannot be paired (expected q1a..q" +
                                      std::to_string(n) + "b)",
                                  label.str());
        auto& slot = label.pad == Pad::A ? pad_a[label.qubit - 1] : pad_b[label.qubit - 1];
        if (slot != -1) throw ValidationError("duplicate node label '" + label.str() + "'", label.str());
        slot = k;
    }

    // Phi_a = (Phi+ + Phi-)/2, Phi_b = (Phi+ - Phi-)/2; columns ordered [+..., -...]
    Matrix t = Matrix::Zero(size, size);
    for (Eigen::Index i = 0; i < n; ++i) {
        t(pad_a[i], i) = 0.5;
        t(pad_a[i], n + i) = 0.5;
        t(pad_b[i], i) = 0.5;
        t(pad_b[i], n + i) = -0.5;
    }
    const Matrix full = t.transpose() * node.matrix * t;

    BlockCapacitanceMatrix out;
    out.cpp = full.topLeftCorner(n, n);
    out.cpm = full.topRightCorner(n, n);
    out.cmm = full.bottomRightCorner(n, n);
    out.cpp = 0.5 * (out.cpp + out.cpp.transpose()).eval();
    out.cmm = 0.5 * (out.cmm + out.cmm.transpose()).eval();
    return out;
}

BlockCapacitanceMatrix build_chain_blocks(const ChainSpec& spec) {
    spec.validate();
    if (spec.scheme == Scheme::SingleEnded)
        throw ValidationError("single-ended chains have no +- mode structure", "scheme");

    const auto n = static_cast<Eigen::Index>(spec.n_qubits);
    const double cg = spec.c_g, cq = spec.c_q, cc = spec.c_c;
    const double quarter = cc / 4.0;
    const bool ab = spec.scheme == Scheme::AB;

    BlockCapacitanceMatrix out;
    out.cpp = Matrix::Zero(n, n);
    out.cmm = Matrix::Zero(n, n);
    out.cpm = Matrix::Zero(n, n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double edge = (i == 0 ? 1.0 : 0.0) + (i == n - 1 ? 1.0 : 0.0);
        const double links = 2.0 - edge; // couplers attached to qubit i
        out.cpp(i, i) = cg / 2.0 + quarter * links;
        out.cmm(i, i) = cq + cg / 2.0 + quarter * links;
        if (ab)
            out.cpm(i, i) = quarter * ((i == n - 1 ? 1.0 : 0.0) - (i == 0 ? 1.0 : 0.0));
        else
            out.cpm(i, i) = -quarter * links;
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        out.cpp(i, i + 1) = out.cpp(i + 1, i) = -quarter;
        if (ab) {
            out.cmm(i, i + 1) = out.cmm(i + 1, i) = quarter;
            out.cpm(i, i + 1) = -quarter;
            out.cpm(i + 1, i) = quarter;
        } else {
            out.cmm(i, i + 1) = out.cmm(i + 1, i) = -quarter;
            out.cpm(i, i + 1) = out.cpm(i + 1, i) = quarter;
        }
    }
    return out;
}

CapacitanceUnit capacitance_unit_from_string(std::string_view s) {
    if (s == "F") return CapacitanceUnit::Farad;
    if (s == "fF") return CapacitanceUnit::Femtofarad;
    throw ValidationError("unknown capacitance unit '" + std::string(s) + "' (expected F or fF)", "unit");
}

namespace {

std::string trim(std::string_view s) {
    auto not_space = [](unsigned char ch) { return !std::isspace(ch) && ch != '"'; };
    auto begin = std::find_if(s.begin(), s.end(), not_space);
    auto end = std::find_if(s.rbegin(), std::make_reverse_iterator(begin), not_space).base();
    return std::string(begin, end);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value))
        throw ParseError("non-numeric capacitance '" + cell + "' at row " + std::to_string(row) + ", column " +
                             std::to_string(col),
                         "row " + std::to_string(row) + ", column " + std::to_string(col));
    return value;
}

} // namespace

NodeCapacitanceMatrix import_capacitance_csv(std::istream& source, const CsvImportOptions& options) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(source, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.size() < 2) throw ParseError("capacitance table needs a header row and at least one data row", "table");

    auto resolve = [&](const std::string& name) -> NodeLabel {
        if (!options.labeling.empty()) {
            auto it = options.labeling.find(name);
            if (it == options.labeling.end())
                throw ParseError("header '" + name + "' has no entry in the node-label map", name);
            return it->second;
        }
        return NodeLabel::parse(name);
    };

    const auto& header = rows.front();
    const std::size_t n = header.size() - 1;
    if (n == 0) throw ParseError("header row has no node labels", "row 1");
    std::vector<NodeLabel> labels;
    for (std::size_t k = 1; k < header.size(); ++k) {
        labels.push_back(resolve(header[k]));
        for (std::size_t m = 0; m + 1 < labels.size(); ++m)
            if (labels[m] == labels.back())
                throw ParseError("duplicate column label '" + header[k] + "'", "row 1, column " + std::to_string(k + 1));
    }
    if (rows.size() - 1 != n)
        throw ParseError("capacitance table is not square: " + std::to_string(n) + " columns, " +
                             std::to_string(rows.size() - 1) + " data rows",
                         "table");

    const double scale = options.unit == CapacitanceUnit::Femtofarad ? 1e-15 : 1.0;
    Matrix m(n, n);
    std::vector<bool> seen(n, false);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        const std::string where = "row " + std::to_string(r + 1);
        if (cells.size() != n + 1)
            throw ParseError(where + " has " + std::to_string(cells.size() - 1) + " values, expected " + std::to_string(n),
                             where);
        const NodeLabel label = resolve(cells[0]);
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end())
            throw ParseError("row label '" + cells[0] + "' does not appear in the header", where);
        const auto i = static_cast<std::size_t>(it - labels.begin());
        if (seen[i]) throw ParseError("duplicate row label '" + cells[0] + "'", where);
        seen[i] = true;
        for (std::size_t c = 0; c < n; ++c) m(i, c) = parse_number(cells[c + 1], r + 1, c + 2) * scale;
    }

    const double magnitude = m.cwiseAbs().maxCoeff();
    double worst = 0.0;
    Eigen::Index wi = 0, wj = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            const double d = std::abs(m(i, j) - m(j, i));
            if (d > worst) {
                worst = d;
                wi = i;
                wj = j;
            }
        }
    const double rel = magnitude > 0.0 ? worst / magnitude : 0.0;
    if (rel > options.symmetry_tolerance)
        throw ParseError("capacitance table is not symmetric: worst pair (" + labels[wi].str() + ", " +
                             labels[wj].str() + ") has relative asymmetry " + format_g(rel, 3) +
                             " > " + format_g(options.symmetry_tolerance, 3),
                         labels[wi].str() + "," + labels[wj].str());
    m = 0.5 * (m + m.transpose()).eval();

    for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (m(i, i) < 0.0)
            throw ParseError("negative diagonal capacitance at node '" + labels[i].str() + "'", labels[i].str());

    return {std::move(labels), std::move(m)};
}

void export_capacitance_csv(std::ostream& sink, const NodeCapacitanceMatrix& node, CapacitanceUnit unit) {
    const double scale = unit == CapacitanceUnit::Femtofarad ? 1e15 : 1.0;
    for (const auto& label : node.labels) sink << ',' << label.str();
    sink << '\n';
    for (std::size_t i = 0; i < node.labels.size(); ++i) {
        sink << node.labels[i].str();
        for (std::size_t j = 0; j < node.labels.size(); ++j)
            sink << ',' << format_shortest(node.matrix(i, j) * scale);
        sink << '\n';
    }
}

ChainStructure analyze_structure(const NodeCapacitanceMatrix& node, double rel_tol) {
    const auto size = static_cast<Eigen::Index>(node.labels.size());
    if (size == 0 || size % 2 != 0) throw ValidationError("structure analysis needs a paired a/b node matrix", "labels");
    const Eigen::Index n = size / 2;
    std::vector<Eigen::Index> a(n, -1), b(n, -1);
    for (Eigen::Index k = 0; k < size; ++k) {
        const auto& l = node.labels[k];
        if (l.pad == Pad::Grounded || l.qubit < 1 || l.qubit > static_cast<std::size_t>(n))
            throw ValidationError("node '" + l.str() + "' cannot be paired", l.str());
        (l.pad == Pad::A ? a : b)[l.qubit - 1] = k;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (a[i] < 0 || b[i] < 0)
            throw ValidationError("qubit " + std::to_string(i + 1) + " is missing a pad", "q" + std::to_string(i + 1));

    const Matrix& m = node.matrix;
    const double scale = m.cwiseAbs().maxCoeff();
    const double zero = rel_tol * scale;

    ChainStructure out;
    Eigen::MatrixXi used = Eigen::MatrixXi::Zero(size, size);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.c_q.push_back(-m(a[i], b[i]));
        used(a[i], b[i]) = used(b[i], a[i]) = 1;
        out.c_ground.push_back(m.row(a[i]).sum());
        out.c_ground.push_back(m.row(b[i]).sum());
    }

    // link pattern: which (pad_i, pad_{i+1}) carries the coupler
    bool consistent = true;
    std::optional<std::pair<Pad, Pad>> pattern;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        double best = 0.0;
        std::pair<Pad, Pad> which{Pad::B, Pad::A};
        Eigen::Index bp = -1, bq = -1;
        for (Pad pi : {Pad::A, Pad::B})
            for (Pad pj : {Pad::A, Pad::B}) {
                const Eigen::Index p = pi == Pad::A ? a[i] : b[i];
                const Eigen::Index q = pj == Pad::A ? a[i + 1] : b[i + 1];
                if (-m(p, q) > best) {
                    best = -m(p, q);
                    which = {pi, pj};
                    bp = p;
                    bq = q;
                }
            }
        out.c_link.push_back(best);
        if (bp >= 0) {
            used(bp, bq) = used(bq, bp) = 1;
            if (!pattern) pattern = which;
            else if (*pattern != which) consistent = false;
        }
    }
    for (Eigen::Index p = 0; p < size; ++p)
        for (Eigen::Index q = 0; q < size; ++q)
            if (p != q && !used(p, q)) out.stray_max = std::max(out.stray_max, std::abs(m(p, q)));

    if (pattern && consistent)
        out.scheme = pattern->first == pattern->second ? Scheme::AA : Scheme::AB;
    else if (n == 1)
        out.scheme = Scheme::AB;

    auto all_equal = [&](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return std::abs(x - v.front()) <= zero; });
    };
    out.uniform = out.scheme.has_value() && out.stray_max <= zero && all_equal(out.c_q) &&
                  all_equal(out.c_ground) && (out.c_link.empty() || all_equal(out.c_link));
    if (out.uniform) {
        ChainSpec spec;
        spec.n_qubits = static_cast<std::size_t>(n);
        spec.scheme = *out.scheme;
        spec.c_q = out.c_q.front();
        spec.c_g = out.c_ground.front();
        spec.c_c = out.c_link.empty() ? 0.0 : out.c_link.front();
        out.spec = spec;
    }
    return out;
}

} // namespace floatchain
