#include "bellsim/scenario.hpp"

namespace bellsim {

namespace {

// Extended Wigner's friend. F1 reads the coin C at t=0 and prepares the
// electron S at t=1; F2 reads S at t=2; A measures F1 (x) C at t=3 and W
// measures F2 (x) S at t=4. The W basis pairs F2 with S throughout.
constexpr const char* fr_json = R"json({
  "name": "fr",
  "tau": 0.5,
  "t_final": 5,
  "factors": [
    {"id": "F1", "labels": ["0", "head", "tail"]},
    {"id": "F2", "labels": ["0", "+", "-"]},
    {"id": "A",  "labels": ["0", "ok", "fail"]},
    {"id": "W",  "labels": ["0", "ok", "fail"]},
    {"id": "C",  "labels": ["head", "tail"]},
    {"id": "S",  "labels": ["up", "down"]}
  ],
  "beables": ["F1", "F2", "A", "W"],
  "initial_state": [
    {"amp": "sqrt(1/3)", "labels": {"C": "head"}},
    {"amp": "sqrt(2/3)", "labels": {"C": "tail"}}
  ],
  "segments": [
    {"pointer": "F1", "end": 0, "outcomes": [
      {"label": "head", "vector": [{"amp": 1, "labels": {"C": "head"}}]},
      {"label": "tail", "vector": [{"amp": 1, "labels": {"C": "tail"}}]}
    ]},
    {"pointer": "F2", "end": 2, "outcomes": [
      {"label": "+", "vector": [{"amp": 1, "labels": {"S": "up"}}]},
      {"label": "-", "vector": [{"amp": 1, "labels": {"S": "down"}}]}
    ]},
    {"pointer": "A", "end": 3, "outcomes": [
      {"label": "ok", "vector": [
        {"amp": "1/sqrt(2)", "labels": {"F1": "head", "C": "head"}},
        {"amp": "-1/sqrt(2)", "labels": {"F1": "tail", "C": "tail"}}
      ]},
      {"label": "fail", "vector": [
        {"amp": "1/sqrt(2)", "labels": {"F1": "head", "C": "head"}},
        {"amp": "1/sqrt(2)", "labels": {"F1": "tail", "C": "tail"}}
      ]}
    ]},
    {"pointer": "W", "end": 4, "outcomes": [
      {"label": "ok", "vector": [
        {"amp": "1/sqrt(2)", "labels": {"F2": "-", "S": "down"}},
        {"amp": "-1/sqrt(2)", "labels": {"F2": "+", "S": "up"}}
      ]},
      {"label": "fail", "vector": [
        {"amp": "1/sqrt(2)", "labels": {"F2": "-", "S": "down"}},
        {"amp": "1/sqrt(2)", "labels": {"F2": "+", "S": "up"}}
      ]}
    ]}
  ],
  "events": [
    {"label": "F1 prepares S", "t": 1, "control": "F1", "target": "S", "blocks": {
      "head": [[0, 1], [1, 0]],
      "tail": [["1/sqrt(2)", "1/sqrt(2)"], ["1/sqrt(2)", "-1/sqrt(2)"]]
    }}
  ],
  "table": {"x": "A", "w": "W", "labels": ["ok", "fail"]},
  "checkpoints": [0, 1, 2, 3, 4]
})json";

// One two-outcome rotation of an environment pointer E reading a system S.
constexpr const char* rotation_json = R"json({
  "name": "rotation",
  "tau": 0.5,
  "t_start": 0,
  "factors": [
    {"id": "S", "labels": ["1", "2"]},
    {"id": "E", "labels": ["0", "1", "2"]}
  ],
  "beables": ["E"],
  "initial_state": [
    {"amp": "sqrt(1/3)", "labels": {"S": "1"}},
    {"amp": "sqrt(2/3)", "labels": {"S": "2"}}
  ],
  "segments": [
    {"pointer": "E", "start": 0, "outcomes": [
      {"label": "1", "vector": [{"amp": 1, "labels": {"S": "1"}}]},
      {"label": "2", "vector": [{"amp": 1, "labels": {"S": "2"}}]}
    ]}
  ]
})json";

// H = 0 over [0, 1]: every distribution must stay put.
constexpr const char* free_json = R"json({
  "name": "free",
  "tau": 1,
  "t_start": 0,
  "factors": [
    {"id": "Q", "labels": ["a", "b"]},
    {"id": "E", "labels": ["0", "1"]}
  ],
  "beables": ["E"],
  "initial_state": [
    {"amp": "sqrt(1/2)", "labels": {"Q": "a", "E": "0"}},
    {"amp": "sqrt(1/2)", "labels": {"Q": "b", "E": "1"}}
  ],
  "segments": [
    {"builder": "matrix", "start": 0, "factors": ["Q", "E"], "hamiltonian": [
      [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]
    ]}
  ],
  "checkpoints": [0, 0.5, 1]
})json";

} // namespace

std::vector<std::string> builtin_names()
{
    return {"fr", "rotation", "free"};
}

ScenarioConfig builtin_config(std::string_view name)
{
    if (name == "fr") {
        return parse_scenario_config(fr_json);
    }
    if (name == "rotation") {
        return parse_scenario_config(rotation_json);
    }
    if (name == "free") {
        return parse_scenario_config(free_json);
    }
    throw Error("unknown built-in scenario '" + std::string(name) + "'");
}

} // namespace bellsim
