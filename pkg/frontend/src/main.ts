import { ApiClient } from "./api";
import { renderInto } from "./scene";
import type { Mode } from "./types";

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const userId = params.get("user") ?? "";
  const mode: Mode = params.get("mode") === "baseline" ? "baseline" : "organic";
  const apiBase = params.get("api") ?? "";
  const root = document.getElementById("app");
  if (!root) return;

  if (!userId) {
    root.innerHTML =
      '<div class="error-panel"><h2>No user selected</h2>' +
      "<p>Open this page as ?user=&lt;id&gt;[&amp;mode=baseline][&amp;api=http://host:port]</p></div>";
    return;
  }

  document.title = `portrait - ${userId}`;
  const api = new ApiClient(apiBase, userId);
  try {
    const layout = await api.fetchPortrait();
    await renderInto(root, layout, mode, api);
  } catch (err) {
    root.innerHTML = "";
    const panel = document.createElement("div");
    panel.className = "error-panel";
    panel.innerHTML = `<h2>Portrait unavailable</h2><p></p>`;
    (panel.querySelector("p") as HTMLElement).textContent = String(err);
    root.appendChild(panel);
  }
}

void boot();
