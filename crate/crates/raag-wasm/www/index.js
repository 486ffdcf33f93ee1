import init, { normalize, building_ball, odometer_cocycle } from "./pkg/raag_wasm.js";

const $ = (id) => document.getElementById(id);

function show(id, f) {
  const out = $(id);
  try {
    out.className = "";
    out.textContent = JSON.stringify(JSON.parse(f()), null, 2);
  } catch (e) {
    out.className = "err";
    out.textContent = String(e);
  }
}

await init();

$("run-normalize").onclick = () => show("out-normalize", () => normalize($("graph").value, $("word").value));

$("run-ball").onclick = () =>
  show("out-ball", () => {
    const res = JSON.parse(building_ball($("graph").value, $("base").value, +$("radius").value, +$("length").value));
    // The DOT text is long; keep it out of the summary.
    const { dot, nodes, ...summary } = res;
    summary.first_nodes = nodes.slice(0, 12);
    summary.dot_bytes = dot.length;
    return JSON.stringify(summary);
  });

$("run-odometer").onclick = () => show("out-odometer", () => odometer_cocycle(+$("bits").value, $("support").value));
