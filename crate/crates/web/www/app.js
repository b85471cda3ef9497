import init, { check_validity, search_countermodel, filtrate } from "./pkg/mmlogic_web.js";

const FRAMES = {
  "D2 (dirty cluster)": {
    worlds: ["x", "y"],
    R: [["x", "x"], ["x", "y"], ["y", "y"]],
    E: [["x", "y"]],
  },
  "2-chain × 2-cluster": {
    worlds: ["a", "b", "c", "d"],
    R: [["a", "a"], ["b", "b"], ["c", "c"], ["d", "d"], ["a", "c"], ["b", "d"]],
    E: [["a", "b"], ["c", "d"]],
  },
  "strict 3-chain": {
    worlds: ["x", "y", "z"],
    R: [["x", "y"], ["x", "z"], ["y", "z"]],
    E: [],
  },
};

const MODELS = {
  "right-commutativity countermodel": {
    worlds: ["x", "y", "z"],
    R: [["x", "x"], ["y", "y"], ["z", "z"], ["x", "y"]],
    E: [["y", "z"]],
    valuation: { p: ["z"] },
  },
  "D2, p at y": { ...FRAMES["D2 (dirty cluster)"], valuation: { p: ["y"] } },
};

const $ = (id) => document.getElementById(id);

function pretty(obj) {
  // One pair per line keeps the editors readable.
  return JSON.stringify(obj, null, 1).replace(/\[\s+"([^"]*)",\s+"([^"]*)"\s+\]/g, '["$1", "$2"]');
}

function presets(container, table, defaults) {
  const target = $(container.dataset.target);
  for (const [name, value] of Object.entries(table)) {
    const b = document.createElement("button");
    b.textContent = name;
    b.addEventListener("click", () => {
      target.value = pretty(value);
      if (defaults[name]) defaults[name]();
    });
    container.appendChild(b);
  }
  target.value = pretty(Object.values(table)[0]);
}

function status(text, good) {
  return `<div class="status ${good ? "good" : "bad"}">${text}</div>`;
}

function escape(s) {
  return s.replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function figure(svg, caption) {
  return `<figure>${svg}<figcaption>${caption}</figcaption></figure>`;
}

function guarded(out, f) {
  try {
    out.innerHTML = f();
  } catch (e) {
    out.innerHTML = status(`Error: ${escape(String(e))}`, false);
  }
}

function runValidity() {
  guarded($("v-out"), () => {
    const r = JSON.parse(check_validity($("v-frame").value, $("v-formula").value));
    if (r.status === "valid") {
      return status(`${escape(r.formula)} is valid on this frame.`, true) + figure(r.svg, "frame");
    }
    const cx = r.counterexample;
    return (
      status(`${escape(r.formula)} is refuted at world ${escape(cx.world)}.`, false) +
      `<div class="drawings">${figure(r.svg, "refuting valuation")}</div>` +
      `<pre>${escape(pretty(cx))}</pre>`
    );
  });
}

function runSearch() {
  guarded($("s-out"), () => {
    const size = Number($("s-size").value);
    const r = JSON.parse(search_countermodel($("s-formula").value, $("s-logic").value, size));
    if (r.status === "valid_up_to_bound") {
      return status(
        `No ${escape(r.logic)}-frame with at most ${r.bound} worlds refutes ${escape(r.formula)} (${r.frames_examined} frames up to isomorphism).`,
        true,
      );
    }
    return (
      status(`Refuted on a ${r.bound}-world ${escape(r.logic)}-frame at ${escape(r.witness.world)} (frame ${r.frames_examined} in search order).`, false) +
      `<div class="drawings">${figure(r.svg, "countermodel")}</div>` +
      `<pre>${escape(pretty(r.witness))}</pre>`
    );
  });
}

function runFiltration() {
  guarded($("f-out"), () => {
    const r = JSON.parse(filtrate($("f-model").value, $("f-formula").value, $("f-variant").value));
    const rows = Object.entries(r.checks)
      .filter(([k]) => k !== "all")
      .map(([k, v]) => `<tr><td>${k.replace(/_/g, " ")}</td><td>${v ? "✓" : "✗"}</td></tr>`)
      .join("");
    const log = r.log
      .map((e) => `${e.round}  ${e.step}${e.point ? " → " + e.point : ""}${e.obligation ? "  [" + e.obligation + "]" : ""}`)
      .join("\n");
    return (
      status(
        `${r.points.length} points, depth ${r.depth ?? "–"} (bound 2^${r.depth_bound_exponent}), ${r.rounds} rounds: ` +
          (r.checks.all ? "all checks pass" : "some checks fail"),
        r.checks.all,
      ) +
      `<div class="drawings">${figure(r.source_svg, "source model")}${figure(r.svg, "filtrated model")}</div>` +
      `<table class="checks">${rows}</table><pre>${escape(log)}</pre>`
    );
  });
}

async function main() {
  await init();
  for (const b of document.querySelectorAll("nav button")) {
    b.addEventListener("click", () => {
      for (const x of document.querySelectorAll("nav button, section")) x.classList.remove("active");
      b.classList.add("active");
      $(b.dataset.tab).classList.add("active");
    });
  }
  presets(document.querySelector('[data-target="v-frame"]'), FRAMES, {});
  presets(document.querySelector('[data-target="f-model"]'), MODELS, {
    "right-commutativity countermodel": () => {
      $("f-formula").value = "com_r";
      $("f-variant").value = "MGrz";
    },
    "D2, p at y": () => {
      $("f-formula").value = "casari";
      $("f-variant").value = "MGrzB";
    },
  });
  $("v-run").addEventListener("click", runValidity);
  $("s-run").addEventListener("click", runSearch);
  $("f-run").addEventListener("click", runFiltration);
}

main();
