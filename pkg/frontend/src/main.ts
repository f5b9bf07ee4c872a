import "./style.css";
import { loadArtifact } from "./app";

const base = new URLSearchParams(window.location.search).get("api") ?? "";
const root = document.getElementById("app");
if (root === null) throw new Error("missing #app mount point");
void loadArtifact(root, base);
