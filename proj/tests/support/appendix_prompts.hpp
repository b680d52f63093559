#pragma once

// Fixture corpus: seven real prompt-optimization tasks, each with the seed
// prompt handed to the optimizer and the optimized prompt it produced. The
// seeds carry DSPY-style scaffolding: ${question} hides an identifier slot
// behind a literal '$', while ${produce the answer} is pure scaffolding text
// whose interior can never be a slot name.

#include <string>
#include <vector>

namespace test_support {

struct AppendixPromptPair {
  const char* name;
  const char* initial;
  const char* optimized;
  std::vector<std::string> initial_slots;    // expected, frozen from the regex oracle
  std::vector<std::string> optimized_slots;  // expected, frozen from the regex oracle
};

inline const std::vector<AppendixPromptPair>& appendix_prompts() {
  static const std::vector<AppendixPromptPair> pairs = {
      {"gsm8k",
       R"(The task is to answer math questions.

---

Follow the following format.

Question:
${question}
Reasoning: Let's think step by step in order to
${produce the answer}
We ...
Answer: the answer to the question provided

---

Question: {question}
Reasoning: Let's think step by step in order to Answer:
${answer}
Answer:)",
       R"(The task is to answer grade school math questions accurately and clearly. Follow these detailed steps to ensure clarity and correctness in your response.

Question:
{question}
Reasoning: Let's think through the problem step by step to produce the correct answer. Follow these instructions carefully:

1. Identify Key Information:
- Read the
{question}
carefully.
- Identify and list the key pieces of information given.
- Clearly state what the question is asking for.

2. Choose the Appropriate Method:
- Determine which mathematical methods or formulas are needed to solve the problem.
- Explain why this method or formula is appropriate for the given question.

3. Apply the Method:
- Carefully apply the chosen method or formula to the problem.
- Show each step of your calculation clearly and in order.
- Explain your reasoning at each stage to ensure clarity.

4. Double-Check:
- After arriving at a solution, double-check your calculations to confirm their accuracy.
- Review your explanation to ensure it is logical and easy to understand.
- Revisit the question to make sure your solution addresses exactly what was asked.

Answer:)",
       {"question", "answer"},
       {"question"}},

      {"orca_math",
       R"(The task is to answer math questions.

---

Follow the following format.

Question:
${question}
Reasoning: Let's think step by step in order to
${produce the answer}
We ...
Answer: the answer to the question provided

---

Question: {question}
Reasoning: Let's think step by step in order to Answer:
${answer}
Answer:)",
       R"(The task involves solving math word problems accurately by following a clear and logical reasoning process. Please adhere to the following format to ensure a coherent and cogent response:

---

Question:
{question}
Reasoning: Let's think step by step in order to produce the answer. We will break down the problem into smaller parts, perform the necessary calculations, and show all work and thought processes clearly. Ensure each step logically follows from the previous one and aligns with the evaluation criteria of correctness, completeness, and clarity.

Answer: Provide the final answer to the question based on the reasoning process above.

---

Question: {question}
Reasoning: Let's think step by step in order to produce the answer. We...
Answer:)",
       {"question", "answer"},
       {"question"}},

      {"neural_bridge_rag",
       R"(The task is a question answering task given context that should have the answer.

---

Follow the following format.

Question:
${question}
Context:
${context}`
Reasoning: Let's think step by step in order to
${produce the answer}
We ...

Answer: the answer to the question given the context provided

---

Question: {question}
Context: {context}
Reasoning: Let's think step by step in order to)",
       R"(You are tasked with answering a question based on a given context. Follow the detailed steps below to ensure your response is specific, comprehensive, and derived solely from the context provided.

1. Carefully read and fully understand the question. Clarify exactly what information is being sought by the question.
2. Thoroughly analyze the given context. Identify and extract all relevant pieces of information that directly pertain to the question.
3. Think logically and proceed step-by-step to connect the extracted details from the context to the question. Clearly explain your reasoning process, ensuring it is detailed, coherent, and directly related to the context.
4. Provide the final answer based on your detailed reasoning process, ensuring it directly addresses the question.

Use the following format for your response:

Question:
{question}
Context:
{context}
Reasoning: Let's think step by step to understand and find the answer. First, identify specific details from the context that are relevant to the question. Then, logically connect these details to derive the answer. Ensure your reasoning is clear, detailed, and coherent.

Answer: The answer to the question based on the context provided)",
       {"question", "context"},
       {"question", "context"}},

      {"hellaswag",
       R"(The task is to complete a sentence with the most logical of 4 possible options.

---

Follow the following format.

Context:
Context for the question
Ending 1:
First possible ending for the question
Ending 2:
Second possible ending for the question
Ending 3:
Third possible ending for the question
Ending 4:
Fourth possible ending for the question
Reasoning: Let's think step by step in order to
${produce the answer}
We ...

Answer: the answer to the question given the possible endings provided

---

Context: {context}
Ending 1: {ending1}
Ending 2: {ending2}
Ending 3: {ending3}
Ending 4: {ending4}
Reasoning: Let's think step by step in order to)",
       R"(Your task is to complete a sentence with the most logical of 4 possible options. Follow these detailed instructions to ensure the best possible output.

### Task Instructions

1. Understand the Context: Carefully read the provided context to grasp the situation, the main idea, and any underlying nuances. Pay close attention to the details that are crucial for understanding the sentence.
2. Analyze Each Option: Evaluate each possible ending individually. Consider its relevance, logical consistency, and coherence with the context. Think about how each option fits with the main idea and details provided in the context.
3. Compare Against the Context: Cross-check each ending with the context to ensure it fits seamlessly and supports the overall meaning. Eliminate any options that do not make sense or disrupt the flow of the sentence.
4. Reasoning Process: Explain your thought process step-by-step. Consider the context and evaluate each ending thoroughly. Justify why each ending is or isn't suitable, providing clear reasons for your choices.
5. Select the Most Logical Ending: Choose the ending that best completes the sentence in a coherent and meaningful way. Ensure that the chosen ending aligns perfectly with the context and enhances the overall understanding of the sentence.

### Format

Context:
{context}
Ending 1:
{ending1}
Ending 2:
{ending2}
Ending 3:
{ending3}
Ending 4:
{ending4}
Reasoning: Let's think step-by-step to produce the answer. We need to consider the context and evaluate each ending one by one to determine which is the most logical. We should look for consistency, relevance, and coherence in the story.

Answer: The answer to the question given the possible endings provided.

---

Context: {context}
Ending 1: {ending1}
Ending 2: {ending2}
Ending 3: {ending3}
Ending 4: {ending4}
Reasoning: Let's think step-by-step in order to...)",
       {"context", "ending1", "ending2", "ending3", "ending4"},
       {"context", "ending1", "ending2", "ending3", "ending4"}},

      {"hotpot_qa",
       R"(The task is a question answering task given context that should have the answer.

---

Follow the following format.

Question:
${question}
Context:
${context}
Reasoning: Let's think step by step in order to
${produce the answer}
We ...

Answer: the answer to the question given the context provided

---

Question: {question}
Context: {context}
Reasoning: Let's think step by step in order to)",
       R"(You need to address a question using the given information through logical reasoning.

---

Use the structure below to deliver a comprehensive and precise answer.

Question:
{question}
Context:
{context}
Reasoning: Let's break this down systematically to arrive at the solution. Begin by pinpointing the essential points in the context relevant to the question. Clearly enumerate each critical point. Then, interpret these points logically, elaborating on how each one aids in establishing a link between the context and the question. Ensure careful consideration of how each point bolsters your argument. Conclusively, infer the answer based on this logical link, ensuring your explanation is consistent, detailed, and specifically addresses the question.

Answer: the answer to the question given the context provided)",
       {"question", "context"},
       {"question", "context"}},

      {"mmlu",
       R"(The task is a question answering task given specific context that should have the answer.

---

Follow the following format.

Question:
${question}
Choices:
${choices}
Reasoning: Let's think step by step in order to
${produce the answer}
We ...

Answer: the answer to the question given the context provided

---

Question: {question}
Choices: {choices}
Reasoning: Let's think step by step in order to)",
       R"(The task is to choose the correct answer from a list of possible answers on a variety of knowledge questions. Follow the guidelines below to ensure a logical and accurate response.

---

Follow this format:

Question:
`question`
Choices:
`choices`
Reasoning: Let's think step by step in order to produce the answer. First, carefully read the question to understand what it is asking. Next, analyze the context and identify key pieces of information that relate to the question. Then, evaluate each choice using logical reasoning. Eliminate the choices that do not match the context or are less likely to be correct. Finally, select the best answer based on the analysis.

Answer: the answer to the question given the context provided

---

Example:

Question: What is the capital of France?

Choices: A) Berlin B) Madrid C) Paris D) Rome

Reasoning: Let's think step by step in order to produce the answer. The question asks for the capital of France. From the context of general knowledge, we know that Berlin is the capital of Germany, Madrid is the capital of Spain, Paris is the capital of France, and Rome is the capital of Italy. Therefore, the correct answer must be Paris.

Answer: C) Paris

---

Now, let's proceed with the task.

Question: {question}
Choices: {choices}
Reasoning: Let's think step by step in order to)",
       {"question", "choices"},
       {"question", "choices"}},

      {"mt_vicuna_bench",
       R"(The task is to be a chat bot assistant that provides helpful answers to questions.

---

Follow the following format.

Question:
${question}
Reasoning: Let's think step by step in order to
${produce the answer}
We ...

Answer: the chat bot answer to the question posed by the user

---

Question: {question}
Reasoning: Let's think step by step in order to)",
       R"(You are a chat bot assistant that provides helpful answers to questions in a personalized, engaging, and conversational tone. Follow the format below to ensure your responses are detailed, structured, and informative. Provide specific examples and offer in-depth analysis to enhance the overall quality of your answers.

---

Question: {question}

Reasoning: Let's think step by step to produce the answer. First, we ... [Provide a detailed, structured explanation, including specific examples where relevant to illustrate your points. Offer in-depth analysis and insights to enhance the overall informative value of your answer.]

Answer: [Provide the final, clear, and concise answer to the question posed by the user.]

---

Question: {question}
Reasoning: Let's think step by step in order to ...)",
       {"question"},
       {"question"}},
  };
  return pairs;
}

}  // namespace test_support
