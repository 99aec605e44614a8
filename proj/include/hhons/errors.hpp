#ifndef HHONS_ERRORS_HPP
#define HHONS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hhons {

/// Mesh construction or file parsing failure (non-manifold edges, bad
/// orientation, malformed input). Carries a line number when raised by the
/// mesh reader, -1 otherwise.
class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what, long line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        m_line(line) {}
  long line() const { return m_line; }

 private:
  long m_line;
};

/// Requested feature exceeds a supported limit (e.g. quadrature exactness).
class CapabilityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Static condensation hit a numerically singular element block.
class CondensationError : public std::runtime_error {
 public:
  CondensationError(const std::string& what, int element)
      : std::runtime_error(what + " (element " + std::to_string(element) + ")"),
        m_element(element) {}
  int element() const { return m_element; }

 private:
  int m_element;
};

}  // namespace hhons

#endif
