// Step 2: author the causal model. Raw DSL and the structured rule rows
// feed the same textarea; the server is the only validator. A rejected
// model raises a blocking banner and step 3 stays unreachable until the
// model passes and a plan attempt is stored.

import {
  InvalidModelResponse,
  requestPlan,
  StaleSessionError,
  submitModel,
  SyntaxErrorResponse,
} from './api';
import { renderGraph } from './graph';
import { store } from './store';

/** Quote a label the way the rule files expect: bare if a single word. */
export function formatLabel(label: string): string {
  const trimmed = label.trim();
  return /^[a-z0-9_]+$/i.test(trimmed) ? trimmed : `"${trimmed}"`;
}

/** One structured rule row compiles to a plain DSL line. */
export function ruleLine(antecedents: string[], effect: string): string {
  const left = antecedents.map(formatLabel).join(' AND ');
  return `${left} CAUSES ${formatLabel(effect)}`;
}

export function renderStep2(root: HTMLElement): void {
  const heading = document.createElement('h2');
  heading.textContent = 'Step 2: how do the functions cause the goal?';
  root.appendChild(heading);

  const editor = document.createElement('textarea');
  editor.className = 'model-source';
  editor.rows = 10;
  editor.spellcheck = false;
  editor.value = store.get().modelSource;
  editor.addEventListener('input', () => {
    store.set({ modelSource: editor.value });
  });
  root.appendChild(editor);

  // structured entry: emits DSL into the same textarea, nothing more
  const builder = document.createElement('div');
  builder.className = 'rule-builder';
  const antecedentsInput = document.createElement('input');
  antecedentsInput.type = 'text';
  antecedentsInput.placeholder = 'causes, comma separated';
  const effectInput = document.createElement('input');
  effectInput.type = 'text';
  effectInput.placeholder = 'effect';
  const addRule = document.createElement('button');
  addRule.className = 'add-rule';
  addRule.textContent = 'Add rule';
  addRule.addEventListener('click', () => {
    const antecedents = antecedentsInput.value
      .split(',')
      .map((a) => a.trim())
      .filter((a) => a.length > 0);
    const effect = effectInput.value.trim();
    if (antecedents.length === 0 || !effect) return;
    const source = store.get().modelSource;
    const line = ruleLine(antecedents, effect);
    const next = source.length && !source.endsWith('\n') ? `${source}\n${line}\n` : `${source}${line}\n`;
    editor.value = next;
    store.set({ modelSource: next });
    antecedentsInput.value = '';
    effectInput.value = '';
  });
  builder.appendChild(antecedentsInput);
  builder.appendChild(effectInput);
  builder.appendChild(addRule);
  root.appendChild(builder);

  const submit = document.createElement('button');
  submit.className = 'submit-model';
  submit.textContent = 'Validate and plan';
  root.appendChild(submit);

  const continueButton = document.createElement('button');
  continueButton.className = 'continue-step3';
  continueButton.textContent = 'Continue to step 3';
  root.appendChild(continueButton);

  const graphPane = document.createElement('div');
  graphPane.className = 'graph-pane';
  root.appendChild(graphPane);

  const planPane = document.createElement('div');
  planPane.className = 'plan-pane';
  root.appendChild(planPane);

  function syncPanes(): void {
    const s = store.get();
    continueButton.disabled = !(s.plan !== null || s.planFailureReason !== null);

    if (s.graph) {
      renderGraph(graphPane, s.graph);
    } else {
      graphPane.innerHTML = '';
    }

    planPane.innerHTML = '';
    if (s.plan) {
      const list = document.createElement('ol');
      list.className = 'plan-steps';
      for (const step of s.plan.steps) {
        const item = document.createElement('li');
        item.textContent = step.text;
        list.appendChild(item);
      }
      planPane.appendChild(list);
      const summary = document.createElement('p');
      summary.className = 'plan-summary';
      summary.textContent = s.plan.achieves_goal
        ? `plan reaches the goal (expected value ${s.plan.expected_value.toFixed(4)})`
        : 'no plan reaches the goal under this model and labeling';
      planPane.appendChild(summary);
    } else if (s.planFailureReason) {
      const failure = document.createElement('p');
      failure.className = 'plan-failure';
      failure.textContent = `planning failed: ${s.planFailureReason}`;
      planPane.appendChild(failure);
    }
  }

  continueButton.addEventListener('click', () => {
    const s = store.get();
    if (s.plan !== null || s.planFailureReason !== null) {
      store.set({ stepIndex: 2, maxCompletedStep: Math.max(s.maxCompletedStep, 1) });
    }
  });

  submit.addEventListener('click', () => {
    void (async () => {
      const s = store.get();
      if (!s.sessionId || !s.trainingObjectId) return;
      try {
        const saved = await submitModel(s.sessionId, s.version, s.modelSource);
        store.set({
          version: saved.version,
          report: saved.report,
          graph: saved.graph,
          banner: null,
          plan: null,
          planFailureReason: null,
        });
      } catch (err) {
        if (err instanceof InvalidModelResponse) {
          const text = err.report.violations.map((v) => v.message).join('; ');
          store.set({
            report: err.report,
            graph: null,
            plan: null,
            planFailureReason: null,
            banner: { kind: 'blocking', text: `model rejected: ${text}` },
          });
          return;
        }
        if (err instanceof SyntaxErrorResponse) {
          store.set({
            banner: {
              kind: 'blocking',
              text: `syntax error at line ${err.line}, column ${err.column}: ${err.message}`,
            },
          });
          return;
        }
        if (err instanceof StaleSessionError) {
          store.set({ staleSession: true });
          return;
        }
        throw err;
      }

      // model accepted: ask the planner right away so the panes fill in
      const fresh = store.get();
      try {
        const planned = await requestPlan(
          fresh.sessionId!,
          fresh.version,
          fresh.trainingObjectId!,
          fresh.trainingEntries,
        );
        if (planned.plan) {
          store.set({
            version: planned.version,
            plan: planned.plan,
            planFailureReason: null,
            maxCompletedStep: Math.max(store.get().maxCompletedStep, 1),
          });
        } else {
          store.set({
            version: planned.version,
            plan: null,
            planFailureReason: planned.reason ?? 'unknown',
            maxCompletedStep: Math.max(store.get().maxCompletedStep, 1),
          });
        }
      } catch (err) {
        if (err instanceof StaleSessionError) {
          store.set({ staleSession: true });
          return;
        }
        throw err;
      }
      syncPanes();
    })();
  });

  store.subscribe(syncPanes);
  syncPanes();
}
