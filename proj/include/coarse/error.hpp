#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coarse {

using PointId = std::uint32_t;

/// Base of every library error. `kind()` is a stable identifier used by
/// reports and the CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Bad parameters, malformed files, unknown ids.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error("InvalidInput", what) {}
};

class UnknownPoint : public Error {
 public:
  explicit UnknownPoint(PointId id)
      : Error("UnknownPoint", "unknown point id " + std::to_string(id)), id_(id) {}
  PointId id() const noexcept { return id_; }

 private:
  PointId id_;
};

class NotCoarselyUnbounded : public Error {
 public:
  explicit NotCoarselyUnbounded(std::vector<std::vector<PointId>> bounded)
      : Error("NotCoarselyUnbounded", describe(bounded)), bounded_(std::move(bounded)) {}
  const std::vector<std::vector<PointId>>& bounded_components() const noexcept { return bounded_; }

 private:
  static std::string describe(const std::vector<std::vector<PointId>>& comps) {
    std::string s = std::to_string(comps.size()) + " Rips component(s) contain no frontier point; first has " +
                    std::to_string(comps.empty() ? 0 : comps.front().size()) + " point(s) starting at " +
                    (comps.empty() || comps.front().empty() ? std::string("?") : std::to_string(comps.front().front()));
    return s;
  }
  std::vector<std::vector<PointId>> bounded_;
};

/// Tower mass sat on a sink: the window is too small for this chain.
class FlowEscaped : public Error {
 public:
  FlowEscaped(PointId sink, std::uint64_t steps_done)
      : Error("FlowEscaped", "tower mass reached sink " + std::to_string(sink) + " after " +
                                 std::to_string(steps_done) + " shift step(s)"),
        sink_(sink),
        steps_(steps_done) {}
  PointId sink() const noexcept { return sink_; }
  std::uint64_t steps_done() const noexcept { return steps_; }

 private:
  PointId sink_;
  std::uint64_t steps_;
};

/// The step budget ||a||_1 * ||t(a)||_1 ran out before the chain became flat.
/// This cannot happen for a correct shift operator; it signals a bug.
class ContradictsClaim2 : public Error {
 public:
  ContradictsClaim2(std::uint64_t bound, std::uint64_t tower_left)
      : Error("ContradictsClaim2", "chain not flat after the full budget of " + std::to_string(bound) +
                                       " steps (tower mass left: " + std::to_string(tower_left) + ")") {}
};

class BranchingTooLow : public Error {
 public:
  BranchingTooLow(PointId vertex, std::size_t children)
      : Error("BranchingTooLow", "interior vertex " + std::to_string(vertex) + " has " +
                                     std::to_string(children) + " child(ren); at least 2 required"),
        vertex_(vertex) {}
  PointId vertex() const noexcept { return vertex_; }

 private:
  PointId vertex_;
};

class TailTooShort : public Error {
 public:
  TailTooShort(PointId x, std::size_t needed_index, std::size_t length)
      : Error("TailTooShort", "tail of " + std::to_string(x) + " has length " + std::to_string(length) +
                                  ", index " + std::to_string(needed_index) + " requested"),
        x_(x) {}
  PointId point() const noexcept { return x_; }

 private:
  PointId x_;
};

class TranslateEscapesWindow : public Error {
 public:
  explicit TranslateEscapesWindow(PointId x)
      : Error("TranslateEscapesWindow", "translate of F by point " + std::to_string(x) + " leaves the window"),
        x_(x) {}
  PointId point() const noexcept { return x_; }

 private:
  PointId x_;
};

class EmptyImage : public Error {
 public:
  EmptyImage() : Error("EmptyImage", "map has empty image") {}
};

class WindowTooSmall : public Error {
 public:
  WindowTooSmall(std::uint64_t boxes, std::uint64_t threshold)
      : Error("WindowTooSmall", std::to_string(boxes) + " box(es) built but the threshold J is " +
                                    std::to_string(threshold) + "; no box lies past it") {}
};

}  // namespace coarse
