#pragma once

#include <string>
#include <string_view>

namespace factorstab::testing {

struct XmlSummary {
  bool well_formed = false;
  std::string error;
  int elements = 0;
  int polylines = 0;
  int panels = 0;  // <g class="panel">
};

/// Small structural XML checker: balanced tags, quoted attributes, one root.
XmlSummary check_xml(std::string_view text);

}  // namespace factorstab::testing
