#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cja {

// Base class for all toolkit errors. `code()` is a stable machine-readable
// identifier; the what() string is for humans.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// ---- graph input errors -------------------------------------------------

class MalformedLine : public Error {
public:
    MalformedLine(int line_no, const std::string& detail)
        : Error("malformed_line",
                "line " + std::to_string(line_no) + ": " + detail),
          line_no_(line_no) {}

    int line_no() const noexcept { return line_no_; }

private:
    int line_no_;
};

class DanglingArc : public Error {
public:
    DanglingArc(int src, int dst,
                const std::string& detail = "references a missing vertex")
        : Error("dangling_arc", "arc (" + std::to_string(src) + "," +
                                    std::to_string(dst) + ") " + detail),
          src_(src), dst_(dst) {}

    int src() const noexcept { return src_; }
    int dst() const noexcept { return dst_; }

private:
    int src_;
    int dst_;
};

class DuplicateVertexId : public Error {
public:
    explicit DuplicateVertexId(int id)
        : Error("duplicate_vertex_id",
                "vertex id " + std::to_string(id) + " appears more than once"),
          id_(id) {}

    int id() const noexcept { return id_; }

private:
    int id_;
};

class ScoreOutOfRange : public Error {
public:
    explicit ScoreOutOfRange(int id)
        : Error("score_out_of_range", "vertex " + std::to_string(id) +
                                          " has a CVSS score outside [0,10]"),
          id_(id) {}

    int id() const noexcept { return id_; }

private:
    int id_;
};

class InfeasibleShape : public Error {
public:
    explicit InfeasibleShape(const std::string& detail)
        : Error("infeasible_shape", detail) {}
};

class UnknownVertex : public Error {
public:
    explicit UnknownVertex(int id)
        : Error("unknown_vertex",
                "vertex " + std::to_string(id) + " is not in the graph"),
          id_(id) {}

    int id() const noexcept { return id_; }

private:
    int id_;
};

class UnknownVertexInPath : public Error {
public:
    explicit UnknownVertexInPath(int id)
        : Error("unknown_vertex_in_path",
                "path references vertex " + std::to_string(id) +
                    " which is not in the graph"),
          id_(id) {}

    int id() const noexcept { return id_; }

private:
    int id_;
};

// ---- MDP / learner errors -----------------------------------------------

class Unreachable : public Error {
public:
    Unreachable(int initial, int goal)
        : Error("unreachable", "no directed path from " +
                                   std::to_string(initial) + " to " +
                                   std::to_string(goal)),
          initial_(initial), goal_(goal) {}

    int initial() const noexcept { return initial_; }
    int goal() const noexcept { return goal_; }

private:
    int initial_;
    int goal_;
};

class NoAdmissibleAction : public Error {
public:
    explicit NoAdmissibleAction(int state)
        : Error("no_admissible_action",
                "state " + std::to_string(state) +
                    " has no outgoing actions and is not the goal"),
          state_(state) {}

    int state() const noexcept { return state_; }

private:
    int state_;
};

class LoopDetected : public Error {
public:
    explicit LoopDetected(std::vector<int> path_so_far)
        : Error("loop_detected",
                "greedy policy revisited vertex " +
                    std::to_string(path_so_far.empty() ? -1
                                                       : path_so_far.back()) +
                    "; policy has not converged"),
          path_(std::move(path_so_far)) {}

    const std::vector<int>& path_so_far() const noexcept { return path_; }

private:
    std::vector<int> path_;
};

// ---- analysis errors ----------------------------------------------------

class EmptyPathSet : public Error {
public:
    EmptyPathSet() : Error("empty_path_set", "no paths to analyze") {}
};

class NoReachableInitialNodes : public Error {
public:
    explicit NoReachableInitialNodes(int cj)
        : Error("no_reachable_initial_nodes",
                "no candidate initial node can reach the 2-hop network of " +
                    std::to_string(cj)),
          cj_(cj) {}

    int crown_jewel() const noexcept { return cj_; }

private:
    int cj_;
};

class EmptyTwoHop : public Error {
public:
    explicit EmptyTwoHop(int cj)
        : Error("empty_two_hop", "2-hop network of " + std::to_string(cj) +
                                     " is empty"),
          cj_(cj) {}

    int crown_jewel() const noexcept { return cj_; }

private:
    int cj_;
};

} // namespace cja
