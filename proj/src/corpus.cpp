#include "twistdex/scenario.hpp"

namespace twistdex {

// Single source for the shipped scenario corpus. The files under scenarios/
// are emitted from these texts; a test keeps them in sync.
std::vector<std::pair<std::string, std::string>> builtinScenarios() {
  std::vector<std::pair<std::string, std::string>> out;

  out.emplace_back("identity-basic", R"json({
  "formatVersion": 1,
  "name": "identity-basic",
  "seed": 11,
  "space": { "dimPlus": 4, "dimMinus": 4 },
  "summability": 3.0,
  "dirac": { "kind": "random-odd-selfadjoint", "scale": 1.0, "invertible": true },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "identity" },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 7, "select": [1, 0] },
    {
      "kind": "explicit",
      "q": 1,
      "entries": [
        [
          [1, 0, 0, 0, 0, 0, 0, 0],
          [0, 1, 0, 0, 0, 0, 0, 0],
          [0, 0, 0, 0, 0, 0, 0, 0],
          [0, 0, 0, 0, 0, 0, 0, 0],
          [0, 0, 0, 0, 1, 0, 0, 0],
          [0, 0, 0, 0, 0, 0, 0, 0],
          [0, 0, 0, 0, 0, 0, 0, 0],
          [0, 0, 0, 0, 0, 0, 0, 0]
        ]
      ]
    }
  ],
  "connections": [
    { "q": 2, "seed": 21, "termCount": 4 }
  ]
}
)json");

  out.emplace_back("inner-conformal", R"json({
  "formatVersion": 1,
  "name": "inner-conformal",
  "seed": 5,
  "space": { "dimPlus": 3, "dimMinus": 3 },
  "summability": 2.0,
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "identity" },
  "conformal": { "enabled": true, "random": true, "spread": 0.3 },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 5, "select": [1, 0] }
  ],
  "connections": [
    { "q": 2, "seed": 31, "termCount": 3 }
  ]
}
)json");

  out.emplace_back("ribbon-inner", R"json({
  "formatVersion": 1,
  "name": "ribbon-inner",
  "seed": 9,
  "space": { "dimPlus": 4, "dimMinus": 2 },
  "summability": 2.0,
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": false },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "inner", "random": true, "spread": 0.25 },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 3, "select": [1, 0] },
    { "kind": "seeded", "q": 1, "seed": 13, "select": [1] }
  ]
}
)json");

  out.emplace_back("linear-halfint", R"json({
  "formatVersion": 1,
  "name": "linear-halfint",
  "seed": 2,
  "space": { "dimPlus": 2, "dimMinus": 1 },
  "summability": 1.0,
  "dirac": {
    "kind": "explicit",
    "matrix": [
      [0, 0, 1],
      [0, 0, 1],
      [1, 1, 0]
    ]
  },
  "algebra": {
    "kind": "generated",
    "generators": [
      [
        [1, 0, 0],
        [0, 0, 0],
        [0, 0, 0]
      ],
      [
        [0, 0, 0],
        [0, 1, 0],
        [0, 0, 1]
      ]
    ]
  },
  "automorphism": {
    "kind": "linear",
    "spanningSet": [
      [
        [1, 0, 0],
        [0, 0, 0],
        [0, 0, 0]
      ],
      [
        [0, 0, 0],
        [0, 1, 0],
        [0, 0, 1]
      ]
    ],
    "images": [
      [
        [0, 0, 0],
        [0, 1, 0],
        [0, 0, 1]
      ],
      [
        [1, 0, 0],
        [0, 0, 0],
        [0, 0, 0]
      ]
    ]
  },
  "idempotents": [
    {
      "kind": "explicit",
      "q": 1,
      "entries": [
        [
          [1, 0, 0],
          [0, 0, 0],
          [0, 0, 0]
        ]
      ]
    }
  ],
  "expectSignals": { "ribbon": "no-ribbon-structure" }
}
)json");

  out.emplace_back("singular-kernel", R"json({
  "formatVersion": 1,
  "name": "singular-kernel",
  "seed": 17,
  "space": { "dimPlus": 3, "dimMinus": 3 },
  "summability": 2.0,
  "dirac": {
    "kind": "explicit",
    "matrix": [
      [0, 0, 0, 1, 0, 0],
      [0, 0, 0, 0, 0.8, 0],
      [0, 0, 0, 0, 0, 0],
      [1, 0, 0, 0, 0, 0],
      [0, 0.8, 0, 0, 0, 0],
      [0, 0, 0, 0, 0, 0]
    ]
  },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "identity" },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 17, "select": [1, 0] },
    {
      "kind": "explicit",
      "q": 1,
      "entries": [
        [
          [1, 0, 0, 0, 0, 0],
          [0, 1, 0, 0, 0, 0],
          [0, 0, 0, 0, 0, 0],
          [0, 0, 0, 1, 0, 0],
          [0, 0, 0, 0, 0, 0],
          [0, 0, 0, 0, 0, 0]
        ]
      ]
    }
  ],
  "checks": [
    "validate-triple",
    "index-kernels",
    "adjoint-identity",
    "tau-bar",
    "similarity",
    "direct-sum",
    "parametrix",
    "hormander"
  ],
  "expectSignals": {
    "parametrix": "requires-invertible",
    "hormander": "requires-invertible"
  }
}
)json");

  out.emplace_back("doubling-homotopy", R"json({
  "formatVersion": 1,
  "name": "doubling-homotopy",
  "seed": 3,
  "space": { "dimPlus": 3, "dimMinus": 3 },
  "summability": 2.0,
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "identity" },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 3, "select": [1, 0] }
  ],
  "homotopy": {
    "families": [
      { "kind": "polynomial", "seed": 19, "amplitude": 0.4 },
      { "kind": "doubling" }
    ],
    "cocycleDegree": 1,
    "gridPoints": 17,
    "panels": 64,
    "refinedPanels": 128,
    "sampleTuples": 3
  }
}
)json");

  out.emplace_back("connections-grassmannian", R"json({
  "formatVersion": 1,
  "name": "connections-grassmannian",
  "seed": 23,
  "space": { "dimPlus": 4, "dimMinus": 4 },
  "summability": 2.0,
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "inner", "random": true, "spread": 0.2 },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 23, "select": [1, 0] },
    { "kind": "seeded", "q": 3, "seed": 29, "select": [1, 1, 0] }
  ],
  "connections": [
    { "q": 2, "seed": 41, "termCount": 3 },
    { "q": 2, "seed": 43, "termCount": 4 },
    { "q": 2, "seed": 47, "termCount": 5 },
    { "q": 3, "seed": 53, "termCount": 4 },
    { "q": 3, "seed": 59, "termCount": 4 }
  ]
}
)json");

  out.emplace_back("direct-sum-similarity", R"json({
  "formatVersion": 1,
  "name": "direct-sum-similarity",
  "seed": 7,
  "space": { "dimPlus": 2, "dimMinus": 2 },
  "summability": 1.0,
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "inner", "random": true, "spread": 0.3 },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 7, "select": [1, 0] },
    { "kind": "seeded", "q": 2, "seed": 11, "select": [0, 1] },
    {
      "kind": "explicit",
      "q": 1,
      "entries": [
        [
          [1, 0, 0, 0],
          [0, 0, 0, 0],
          [0, 0, 1, 0],
          [0, 0, 0, 1]
        ]
      ]
    }
  ]
}
)json");

  out.emplace_back("generated-algebra", R"json({
  "formatVersion": 1,
  "name": "generated-algebra",
  "seed": 37,
  "space": { "dimPlus": 3, "dimMinus": 3 },
  "summability": 2.0,
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
  "algebra": {
    "kind": "generated",
    "generators": [
      [
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0]
      ],
      [
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0]
      ]
    ]
  },
  "automorphism": { "kind": "identity" },
  "idempotents": [
    { "kind": "seeded", "q": 2, "seed": 37, "select": [1, 0] }
  ]
}
)json");

  out.emplace_back("signals-demo", R"json({
  "formatVersion": 1,
  "name": "signals-demo",
  "seed": 1,
  "space": { "dimPlus": 2, "dimMinus": 2 },
  "summability": 1.0,
  "dirac": { "kind": "zero" },
  "algebra": { "kind": "full-even" },
  "automorphism": { "kind": "identity" },
  "idempotents": [
    { "kind": "seeded", "q": 1, "seed": 2, "select": [1] }
  ],
  "connections": [
    {
      "q": 1,
      "terms": [
        {
          "i": 0,
          "j": 0,
          "left": [
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [1, 0, 0, 0],
            [0, 1, 0, 0]
          ],
          "right": [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1]
          ]
        }
      ]
    }
  ],
  "homotopy": {
    "families": [
      { "kind": "polynomial", "seed": 3, "amplitude": 0.3 }
    ],
    "cocycleDegree": 1,
    "gridPoints": 3,
    "panels": 2,
    "refinedPanels": 4,
    "sampleTuples": 1
  },
  "checks": [
    "index-kernels",
    "parametrix",
    "chern-pairing",
    "homotopy",
    "connections"
  ],
  "expectSignals": {
    "parametrix": "requires-invertible",
    "chern-pairing": "requires-invertible",
    "homotopy": "requires-invertible",
    "connections": "invalid-connection"
  }
}
)json");

  return out;
}

}  // namespace twistdex
