#include "fgs/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fgs {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

void write_json_atomic(const std::string& path, const ojson& doc) {
    write_text_atomic(path, doc.dump(2) + "\n");
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("to_csv: ragged row");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string svg_line_plot(
    const std::string& title,
    const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
    const std::string& x_label, const std::string& y_label) {
    const int W = 720, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [name, pts] : series)
        for (const auto& [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                            "#ff7f0e", "#8c564b"};
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(W) + "\" height=\"" + std::to_string(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
    // axes
    s += "<line x1=\"" + std::to_string(ML) + "\" y1=\"" + std::to_string(H - MB) +
         "\" x2=\"" + std::to_string(W - MR) + "\" y2=\"" + std::to_string(H - MB) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + std::to_string(ML) + "\" y1=\"" + std::to_string(MT) +
         "\" x2=\"" + std::to_string(ML) + "\" y2=\"" + std::to_string(H - MB) +
         "\" stroke=\"black\"/>\n";
    auto tick = [&](double v, bool xaxis) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", v);
        if (xaxis)
            s += "<text x=\"" + std::to_string(px(v)) + "\" y=\"" +
                 std::to_string(H - MB + 18) +
                 "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                 "font-size=\"11\">" + buf + "</text>\n";
        else
            s += "<text x=\"" + std::to_string(ML - 8) + "\" y=\"" +
                 std::to_string(py(v) + 4) +
                 "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                 "font-size=\"11\">" + buf + "</text>\n";
    };
    for (int t = 0; t <= 4; ++t) {
        tick(xmin + (xmax - xmin) * t / 4.0, true);
        tick(ymin + (ymax - ymin) * t / 4.0, false);
    }
    s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"" + std::to_string(H - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         x_label + "</text>\n";
    s += "<text x=\"16\" y=\"" + std::to_string(H / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " + std::to_string(H / 2) + ")\">" + y_label +
         "</text>\n";
    int ci = 0;
    for (const auto& [name, pts] : series) {
        const char* color = colors[ci % 6];
        std::string poly;
        for (const auto& [x, y] : pts)
            poly += std::to_string(px(x)) + "," + std::to_string(py(y)) + " ";
        s += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + poly + "\"/>\n";
        s += "<text x=\"" + std::to_string(W - MR - 6) + "\" y=\"" +
             std::to_string(MT + 16 * (ci + 1)) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
             "fill=\"" + color + "\">" + name + "</text>\n";
        ++ci;
    }
    s += "</svg>\n";
    return s;
}

ojson record_to_json(const GroundStateRecord& rec, bool include_values) {
    ojson doc;
    doc["grid"] = {{"N", rec.u.grid.dim},
                   {"L", rec.u.grid.half_width},
                   {"n", rec.u.grid.n}};
    doc["s"] = rec.s;
    doc["lambda"] = rec.lambda;
    doc["residual_norm"] = rec.residual_norm;
    doc["residual_rel"] = rec.residual_rel;
    doc["kinetic"] = rec.kinetic;
    doc["mass"] = rec.mass;
    doc["potential"] = rec.potential;
    doc["action"] = rec.action;
    doc["max_value"] = rec.max_value;
    doc["picard_iterations"] = rec.picard_iterations;
    doc["newton_iterations"] = rec.newton_iterations;
    doc["converged"] = rec.converged;
    if (include_values) {
        std::vector<double> vals(rec.u.values.data(),
                                 rec.u.values.data() + rec.u.values.size());
        doc["values"] = vals;
    }
    return doc;
}

GroundStateRecord record_from_json(const ojson& doc) {
    GroundStateRecord rec;
    const auto& g = doc.at("grid");
    Grid grid = make_grid(g.at("N").get<int>(), g.at("L").get<double>(),
                          g.at("n").get<int>());
    std::vector<double> vals = doc.at("values").get<std::vector<double>>();
    if (static_cast<std::int64_t>(vals.size()) != grid.size())
        throw std::invalid_argument("record_from_json: value count mismatch");
    Array a(grid.size());
    for (std::int64_t i = 0; i < grid.size(); ++i) a[i] = vals[static_cast<size_t>(i)];
    rec.u = Field(grid, std::move(a));
    rec.s = doc.at("s").get<double>();
    rec.lambda = doc.at("lambda").get<double>();
    rec.residual_norm = doc.at("residual_norm").get<double>();
    rec.residual_rel = doc.at("residual_rel").get<double>();
    rec.kinetic = doc.at("kinetic").get<double>();
    rec.mass = doc.at("mass").get<double>();
    rec.potential = doc.at("potential").get<double>();
    rec.action = doc.at("action").get<double>();
    rec.max_value = doc.at("max_value").get<double>();
    rec.converged = doc.at("converged").get<bool>();
    return rec;
}

} // namespace fgs
