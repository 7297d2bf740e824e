#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "qsphere/incidence.hpp"

namespace qsphere {

/// Instance text format, one object per line:
///   points   "i1,i2,...,id"      (coordinates as element indices)
///   spheres  "i1,...,id;r"       (center;radius)
/// Lines starting with '#' are comments. The writer records the field and
/// form in the comment lines "# field p=<p> k=<k>" and "# form <kind> d=<d>",
/// which the reader uses when no form is supplied.
void write_instance(std::ostream& out, const PointSet& points, const SphereSet& spheres);
void write_instance_file(const std::string& path, const PointSet& points, const SphereSet& spheres);

struct Instance {
    PointSet points;
    SphereSet spheres;
};

Instance read_instance(std::istream& in, const std::optional<QuadraticForm>& form = std::nullopt);
Instance read_instance_file(const std::string& path, const std::optional<QuadraticForm>& form = std::nullopt);

}  // namespace qsphere
