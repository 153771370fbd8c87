#include "learning_base.hpp"

#include "csv.hpp"
#include "errors.hpp"

#include <cmath>

namespace surrokit {

void LearningBase::validate() const {
    if (X.rows() != y.size()) throw input_error("learning base: X/y size mismatch");
    if (lo.size() != X.cols() || hi.size() != X.cols())
        throw input_error("learning base: bounds/dimension mismatch");
    if (names.size() != static_cast<std::size_t>(X.cols()))
        throw input_error("learning base: names/dimension mismatch");
    if (!X.allFinite() || !y.allFinite())
        throw input_error("learning base: non-finite entry");
}

Eigen::MatrixXd LearningBase::normalized() const {
    Eigen::MatrixXd U(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        U.row(i) = normalize_point(X.row(i));
    return U;
}

Eigen::VectorXd LearningBase::normalize_point(const Eigen::VectorXd& x) const {
    if (x.size() != lo.size()) throw input_error("normalize_point: dimension mismatch");
    Eigen::VectorXd u(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double span = hi[j] - lo[j];
        u[j] = span > 0.0 ? (x[j] - lo[j]) / span : 0.0;
    }
    return u;
}

void LearningBase::rebound_from_data() {
    lo = X.colwise().minCoeff();
    hi = X.colwise().maxCoeff();
}

void save_base_csv(const LearningBase& base, const std::string& path) {
    base.validate();
    std::vector<std::string> header(base.names);
    header.push_back("output");
    header.push_back("warnings");
    header.push_back("status");
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < base.n(); ++i) {
        std::vector<std::string> r;
        for (int j = 0; j < base.dim(); ++j)
            r.push_back(csv::format_double(base.X(i, j)));
        r.push_back(csv::format_double(base.y[i]));
        r.push_back(base.warnings.empty() ? "" : base.warnings[i]);
        r.push_back("ok");
        rows.push_back(std::move(r));
    }
    csv::write(path, header, rows);
}

LearningBase load_base_csv(const std::string& path) {
    const auto t = csv::read(path);
    const int cy = t.column("output");
    if (cy < 0) throw input_error("base file '" + path + "': missing 'output' column");
    const int cw = t.column("warnings");
    const int cs = t.column("status");

    std::vector<int> input_cols;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        const int cj = static_cast<int>(j);
        if (cj == cy || cj == cw || cj == cs) continue;
        if (t.header[j] == "row") continue;
        input_cols.push_back(cj);
        names.push_back(t.header[j]);
    }
    if (input_cols.empty()) throw input_error("base file '" + path + "': no input columns");

    LearningBase base;
    base.names = names;
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
    std::vector<std::string> warns;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (cs >= 0 && r[cs] != "ok") continue;
        Eigen::VectorXd x(input_cols.size());
        for (std::size_t j = 0; j < input_cols.size(); ++j)
            x[static_cast<Eigen::Index>(j)] =
                csv::parse_double(r[input_cols[j]], "base file column '" + names[j] + "'");
        xs.push_back(std::move(x));
        ys.push_back(csv::parse_double(r[cy], "base file column 'output'"));
        warns.push_back(cw >= 0 ? r[cw] : "");
    }
    if (xs.empty()) throw input_error("base file '" + path + "': no usable rows");
    base.X.resize(static_cast<Eigen::Index>(xs.size()), xs[0].size());
    base.y.resize(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        base.X.row(static_cast<Eigen::Index>(i)) = xs[i];
        base.y[static_cast<Eigen::Index>(i)] = ys[i];
    }
    base.warnings = warns;
    base.rebound_from_data();
    base.validate();
    return base;
}

} // namespace surrokit
