import { buildApp } from "./ui.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("index.html must contain <div id='app'>");
}
buildApp(root);
