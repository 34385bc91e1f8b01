import { Kiosk } from "./kiosk.js";
import { StreamClient } from "./net.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

const server = param("server", window.location.origin);
const refreshSeconds = Number(param("refresh", "60"));
const basemapUrl = param("basemap", "");

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const kiosk = new Kiosk(root, {
  refreshSeconds,
  basemapUrl: basemapUrl || undefined,
});
kiosk.start();

const stream = new StreamClient(server, (env) => kiosk.push(env), {
  refreshSeconds,
});
stream.start();
