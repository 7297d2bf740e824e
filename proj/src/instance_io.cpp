#include "qsphere/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "qsphere/error.hpp"

namespace qsphere {

namespace {

void write_point(std::ostream& out, const Point& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out << ',';
        out << x[i].index;
    }
}

std::uint64_t parse_uint(std::string_view text, std::size_t line_no) {
    std::uint64_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    while (first != last && *first == ' ') ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\r')) --last;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad integer '" + std::string(text) + "'");
    }
    return value;
}

Point parse_point(std::string_view text, const Field& field, int d, std::size_t line_no) {
    Point x;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        x.push_back(field.element(parse_uint(part, line_no)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (x.size() != static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(line_no) + ": expected " + std::to_string(d) +
                                                      " coordinates");
    }
    return x;
}

}  // namespace

void write_instance(std::ostream& out, const PointSet& points, const SphereSet& spheres) {
    const QuadraticForm& form = spheres.form();
    out << "# qsphere instance\n";
    out << "# field p=" << form.field().p() << " k=" << form.field().k() << "\n";
    out << "# form " << to_string(form.kind()) << " d=" << form.dim() << "\n";
    out << "# points " << points.size() << "\n";
    for (const Point& x : points.points()) {
        write_point(out, x);
        out << '\n';
    }
    out << "# spheres " << spheres.size() << "\n";
    for (const Sphere& s : spheres.spheres()) {
        write_point(out, s.center);
        out << ';' << s.radius.index << '\n';
    }
}

void write_instance_file(const std::string& path, const PointSet& points, const SphereSet& spheres) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOError, "cannot open '" + path + "' for writing");
    write_instance(out, points, spheres);
    if (!out) throw Error(ErrorCode::IOError, "failed writing '" + path + "'");
}

Instance read_instance(std::istream& in, const std::optional<QuadraticForm>& form_hint) {
    std::optional<QuadraticForm> form = form_hint;
    std::optional<std::uint32_t> p;
    int k = 1;
    std::optional<FormKind> kind;
    int d = 0;
    std::vector<std::pair<std::size_t, std::string>> body;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream words(line.substr(1));
            std::string tag;
            words >> tag;
            if (tag == "field") {
                std::string a, b;
                words >> a >> b;
                if (a.rfind("p=", 0) == 0) p = static_cast<std::uint32_t>(parse_uint(a.substr(2), line_no));
                if (b.rfind("k=", 0) == 0) k = static_cast<int>(parse_uint(b.substr(2), line_no));
            } else if (tag == "form") {
                std::string name, dim;
                words >> name >> dim;
                kind = parse_form_kind(name);
                if (dim.rfind("d=", 0) == 0) d = static_cast<int>(parse_uint(dim.substr(2), line_no));
            }
            continue;
        }
        body.emplace_back(line_no, line);
    }
    if (!form) {
        if (!p || !kind || d == 0) throw Error(ErrorCode::ParseError, "instance has no field/form header and no form was given");
        form.emplace(*kind, d, make_field(*p, k));
    }
    Instance inst{PointSet(form->dim()), SphereSet(*form)};
    for (const auto& [no, text] : body) {
        const std::size_t semi = text.find(';');
        if (semi == std::string::npos) {
            inst.points.insert(parse_point(text, form->field(), form->dim(), no));
        } else {
            Point center = parse_point(std::string_view(text).substr(0, semi), form->field(), form->dim(), no);
            const FieldElement radius = form->field().element(parse_uint(std::string_view(text).substr(semi + 1), no));
            inst.spheres.insert(std::move(center), radius);
        }
    }
    return inst;
}

Instance read_instance_file(const std::string& path, const std::optional<QuadraticForm>& form) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IOError, "cannot open '" + path + "'");
    return read_instance(in, form);
}

}  // namespace qsphere
